#pragma once
#include <utility>
#include <vector>
#include "fixsplit/number_field.hpp"

namespace fixsplit {

/* 2D vector of Scalars (holonomy coordinates in flat-length units). */
struct Vec {
    Scalar x, y;
};

Vec v_add(const Vec& a, const Vec& b);
Vec v_sub(const Vec& a, const Vec& b);
Vec v_neg(const Vec& a);
Vec v_scale(const Vec& a, const Rat& r);
Vec v_scale_int(const Vec& a, const Int& n);
Scalar cross(const Vec& a, const Vec& b);
Scalar dot(const Vec& a, const Vec& b);
Scalar len2(const Vec& a);                   // squared flat length, exact
bool v_is_zero(const Vec& a);
bool v_equal(const Vec& a, const Vec& b);    // representation equality
std::string v_repr(const Vec& a);

Vec vec_from_rats(const ScalarMode& m, const Rat& x, const Rat& y);

/* tangent-style angle measure |cross|/dot on the acute sector;
   monotone in the true angle, so epsilon budgets stay meaningful.
   Throws ObtuseOrZero if dot(v,w) <= 0. */
Scalar angle_measure(const Vec& v, const Vec& w);

/* Rank-2 lattice stored in Lagrange-Gauss reduced normal form:
   |b1| <= |b2| (exact squared lengths) and cross(b1,b2) > 0. */
struct Lattice {
    Vec b1, b2;
};

/* Reduce an arbitrary basis to normal form. Throws DegenerateLattice. */
Lattice make_lattice(const Vec& b1, const Vec& b2);
inline Lattice reduce(const Lattice& l) { return make_lattice(l.b1, l.b2); }
/* Checks independence but keeps the basis exactly as given; for results whose
   basis is itself part of the contract (e.g. twisted lattices). */
Lattice make_lattice_raw(const Vec& b1, const Vec& b2);

Scalar covolume(const Lattice& l);           // |cross(b1,b2)| > 0

/* exact Cramer coordinates of v in the basis */
std::pair<Scalar, Scalar> coordinates_in(const Lattice& l, const Vec& v);

bool in_lattice(const Lattice& l, const Vec& v);

/* true iff v = m b1 + n b2 with gcd(m,n) = 1; throws NotInLattice. */
bool is_primitive(const Lattice& l, const Vec& v);

/* same set of points (mutual integer coordinates + equal covolume) */
bool lattices_identical(const Lattice& a, const Lattice& b);

/* some nonzero lattice vector is parallel to w; throws ZeroVector. */
bool direction_is_rational(const Lattice& l, const Vec& w);

/* shortest nonzero lattice vector parallel to w (primitive, sign of dot > 0
   when possible); only valid when direction_is_rational. */
Vec parallel_primitive(const Lattice& l, const Vec& w);

/* directional convergents by continued-fraction/Gauss descent on the basis:
   `count` primitive vectors with dot(v,w) > 0, strictly decreasing |cross(v,w)|,
   each minimizing |cross(., w)| among lattice vectors of length <= |v|.
   Throws RationalDirection. */
std::vector<Vec> best_approximations(const Lattice& l, const Vec& w, int count);

/* |cross(v,dir)| / |dir| as a machine float (needs a square root).
   Throws ZeroDirection. */
double perp_component(const Vec& v, const Vec& dir);

/* change-of-basis matrix l2 -> l1 has four rational entries */
bool commensurable(const Lattice& l1, const Lattice& l2);

/* basis completion u of primitive v in lat with sigma * cross(v, u) > 0;
   throws NotInLattice / NotPrimitive. */
Vec basis_completion(const Lattice& lat, const Vec& v, int sigma);

/* transversal t with (w, t) a basis of l, cross(w, t) > 0 and
   0 <= dot(t, w) < dot(w, w); requires w primitive in l. */
Vec completion_transversal(const Lattice& l, const Vec& w);

/* unipotent shear (x,y) -> (x + s y, y) */
struct Shear {
    Scalar s;
};
Vec apply_shear(const Shear& sh, const Vec& v);

} // namespace fixsplit
