#include "fixsplit/planar.hpp"
#include <cmath>
#include <sstream>

namespace fixsplit {

Vec v_add(const Vec& a, const Vec& b) { return {s_add(a.x, b.x), s_add(a.y, b.y)}; }
Vec v_sub(const Vec& a, const Vec& b) { return {s_sub(a.x, b.x), s_sub(a.y, b.y)}; }
Vec v_neg(const Vec& a) { return {s_neg(a.x), s_neg(a.y)}; }
Vec v_scale(const Vec& a, const Rat& r) { return {s_scale(a.x, r), s_scale(a.y, r)}; }
Vec v_scale_int(const Vec& a, const Int& n) { return v_scale(a, Rat(n)); }

Scalar cross(const Vec& a, const Vec& b) { return s_sub(s_mul(a.x, b.y), s_mul(a.y, b.x)); }
Scalar dot(const Vec& a, const Vec& b) { return s_add(s_mul(a.x, b.x), s_mul(a.y, b.y)); }
Scalar len2(const Vec& a) { return dot(a, a); }

bool v_is_zero(const Vec& a) { return s_sign(a.x) == 0 && s_sign(a.y) == 0; }
bool v_equal(const Vec& a, const Vec& b) { return s_equal(a.x, b.x) && s_equal(a.y, b.y); }

std::string v_repr(const Vec& a) { return "(" + s_repr(a.x) + ", " + s_repr(a.y) + ")"; }

Vec vec_from_rats(const ScalarMode& m, const Rat& x, const Rat& y) {
    return {Scalar::from_rat(m, x), Scalar::from_rat(m, y)};
}

Scalar angle_measure(const Vec& v, const Vec& w) {
    Scalar d = dot(v, w);
    if (s_sign(d) <= 0) throw err("ObtuseOrZero", "angle_measure needs dot(v,w) > 0");
    return s_div(s_abs(cross(v, w)), d);
}

namespace {

/* lexicographic sign normalization: first nonzero coordinate positive */
Vec sign_normalize(const Vec& v) {
    int sx = s_sign(v.x);
    if (sx < 0 || (sx == 0 && s_sign(v.y) < 0)) return v_neg(v);
    return v;
}

int lex_cmp(const Vec& a, const Vec& b) {
    int c = s_cmp(a.x, b.x);
    if (c != 0) return c;
    return s_cmp(a.y, b.y);
}

} // namespace

Lattice make_lattice(const Vec& b1in, const Vec& b2in) {
    if (s_sign(cross(b1in, b2in)) == 0)
        throw err("DegenerateLattice", "basis vectors are collinear");
    Vec b1 = b1in, b2 = b2in;
    /* Lagrange-Gauss: shrink b2 against b1 until reduced */
    for (;;) {
        if (s_cmp(len2(b2), len2(b1)) < 0) std::swap(b1, b2);
        Scalar mu = s_div(dot(b1, b2), len2(b1));
        Int m = s_round(mu);
        if (m == 0) break;
        b2 = v_sub(b2, v_scale_int(b1, m));
    }
    if (s_cmp(len2(b2), len2(b1)) < 0) std::swap(b1, b2);
    /* deterministic normal form: fix signs; on equal lengths order by lex */
    b1 = sign_normalize(b1);
    if (s_cmp(len2(b1), len2(b2)) == 0) {
        b2 = sign_normalize(b2);
        if (lex_cmp(b1, b2) < 0) std::swap(b1, b2);
    }
    if (s_sign(cross(b1, b2)) < 0) b2 = v_neg(b2);
    return Lattice{b1, b2};
}

Lattice make_lattice_raw(const Vec& b1, const Vec& b2) {
    if (s_sign(cross(b1, b2)) == 0)
        throw err("DegenerateLattice", "basis vectors are collinear");
    return Lattice{b1, b2};
}

Scalar covolume(const Lattice& l) { return s_abs(cross(l.b1, l.b2)); }

std::pair<Scalar, Scalar> coordinates_in(const Lattice& l, const Vec& v) {
    Scalar d = cross(l.b1, l.b2);
    return {s_div(cross(v, l.b2), d), s_div(cross(l.b1, v), d)};
}

namespace {

/* exact integer value when the scalar is an integer */
bool scalar_to_int(const Scalar& s, Int& out) {
    if (s.is_float()) {
        double r = std::round(s.raw_float());
        if (std::abs(s.raw_float() - r) > kFloatSignTol) return false;
        mpz_set_d(out.get_mpz_t(), r);
        return true;
    }
    if (!s_is_rational(s)) return false;
    const Rat& q = s.coeffs()[0];
    if (q.get_den() != 1) return false;
    out = q.get_num();
    return true;
}

} // namespace

bool in_lattice(const Lattice& l, const Vec& v) {
    auto [a, b] = coordinates_in(l, v);
    Int m, n;
    return scalar_to_int(a, m) && scalar_to_int(b, n);
}

bool is_primitive(const Lattice& l, const Vec& v) {
    auto [a, b] = coordinates_in(l, v);
    Int m, n;
    if (!scalar_to_int(a, m) || !scalar_to_int(b, n))
        throw err("NotInLattice", "vector is not a lattice point");
    if (m == 0 && n == 0) return false;
    Int g;
    mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), n.get_mpz_t());
    return g == 1;
}

bool lattices_identical(const Lattice& a, const Lattice& b) {
    return in_lattice(a, b.b1) && in_lattice(a, b.b2)
        && in_lattice(b, a.b1) && in_lattice(b, a.b2);
}

bool direction_is_rational(const Lattice& l, const Vec& w) {
    if (v_is_zero(w)) throw err("ZeroVector", "direction of the zero vector");
    Scalar p = cross(l.b1, w), q = cross(l.b2, w);
    if (s_sign(p) == 0 || s_sign(q) == 0) return true;
    return s_is_rational(s_div(p, q));
}

Vec parallel_primitive(const Lattice& l, const Vec& w) {
    Scalar p = cross(l.b1, w), q = cross(l.b2, w);
    if (s_sign(p) == 0) {
        Vec r = l.b1;
        if (s_sign(dot(r, w)) < 0) r = v_neg(r);
        return r;
    }
    if (s_sign(q) == 0) {
        Vec r = l.b2;
        if (s_sign(dot(r, w)) < 0) r = v_neg(r);
        return r;
    }
    /* m p + n q = 0 with p/q = a/b in lowest terms -> (m,n) = (-b, a) */
    Rat r = s_to_rat(s_div(p, q));
    Vec lam = v_add(v_scale_int(l.b1, -r.get_den()), v_scale_int(l.b2, r.get_num()));
    if (s_sign(dot(lam, w)) < 0) lam = v_neg(lam);
    return lam;
}

std::vector<Vec> best_approximations(const Lattice& l, const Vec& w, int count) {
    if (direction_is_rational(l, w))
        throw err("RationalDirection", "best approximations need an irrational direction");
    std::vector<Vec> out;
    if (count <= 0) return out;
    Vec u = l.b1, v = l.b2;
    Scalar su = cross(u, w), sv = cross(v, w);
    if (s_sign(su) == s_sign(sv)) { v = v_neg(v); sv = s_neg(sv); }
    while (static_cast<int>(out.size()) < count) {
        /* reduce whichever basis member has the larger |cross| by the other */
        if (s_cmp(s_abs(su), s_abs(sv)) >= 0) {
            Int a = s_floor(s_div(su, s_neg(sv)));
            u = v_add(u, v_scale_int(v, a));
            su = s_add(su, s_scale(sv, Rat(a)));
            out.push_back(u);
        } else {
            Int a = s_floor(s_div(sv, s_neg(su)));
            v = v_add(v, v_scale_int(u, a));
            sv = s_add(sv, s_scale(su, Rat(a)));
            out.push_back(v);
        }
    }
    for (Vec& r : out) {
        int d = s_sign(dot(r, w));
        if (d < 0 || (d == 0 && s_sign(cross(r, w)) < 0)) r = v_neg(r);
    }
    return out;
}

double perp_component(const Vec& v, const Vec& dir) {
    if (v_is_zero(dir)) throw err("ZeroDirection", "perpendicular component against zero direction");
    double c = std::abs(s_to_double(cross(v, dir)));
    double n = std::hypot(s_to_double(dir.x), s_to_double(dir.y));
    return c / n;
}

bool commensurable(const Lattice& l1, const Lattice& l2) {
    auto [a, b] = coordinates_in(l1, l2.b1);
    auto [c, d] = coordinates_in(l1, l2.b2);
    return s_is_rational(a) && s_is_rational(b) && s_is_rational(c) && s_is_rational(d);
}

Vec apply_shear(const Shear& sh, const Vec& v) {
    return {s_add(v.x, s_mul(sh.s, v.y)), v.y};
}

Vec basis_completion(const Lattice& lat, const Vec& v, int sigma) {
    if (!is_primitive(lat, v)) throw err("NotPrimitive", "basis completion needs a primitive vector");
    auto [a, b] = coordinates_in(lat, v);
    Rat ra = s_to_rat(a), rb = s_to_rat(b);
    Int m = ra.get_num(), n = rb.get_num();
    Int g, x, y;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), m.get_mpz_t(), n.get_mpz_t());
    /* u = p b1 + q b2 with m q - n p = 1 */
    Int q = x, p = -y;
    Vec u = v_add(v_scale_int(lat.b1, p), v_scale_int(lat.b2, q));
    if (s_sign(cross(v, u)) * sigma < 0) u = v_neg(u);
    return u;
}

Vec completion_transversal(const Lattice& l, const Vec& w) {
    Vec t = basis_completion(l, w, +1);   // cross(w, t) > 0
    Int k = s_floor(s_div(dot(t, w), dot(w, w)));
    return v_sub(t, v_scale_int(w, k));
}

} // namespace fixsplit
