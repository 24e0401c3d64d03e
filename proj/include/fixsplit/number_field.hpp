#pragma once
#include <cmath>
#include <memory>
#include <optional>
#include <vector>
#include "fixsplit/rational.hpp"

namespace fixsplit {

/* Real-embedded number field Q(theta), theta the unique root of a monic
   integer polynomial inside the isolating interval (lo, hi).  Degree 1..4;
   irreducibility is validated at construction. */
class NumberField {
public:
    static std::shared_ptr<const NumberField> make(std::vector<Int> poly, Rat lo, Rat hi);

    int degree() const { return degree_; }
    const std::vector<Int>& poly() const { return poly_; }       // c0..cd, cd = 1
    const Rat& lo() const { return lo_; }
    const Rat& hi() const { return hi_; }

    /* quadratic x^2 + p x + q helpers (degree 2 only) */
    const Int& quad_p() const { return qp_; }
    const Int& quad_q() const { return qq_; }
    const Int& quad_disc() const { return qdisc_; }              // p^2 - 4q > 0
    bool root_is_upper() const { return upper_; }                // theta = (-p + sqrt(disc))/2 ?

    /* sign of min_poly at a rational point */
    int poly_sign(const Rat& x) const;

private:
    NumberField() = default;
    std::vector<Int> poly_;
    Rat lo_, hi_;
    int degree_ = 0;
    Int qp_, qq_, qdisc_;
    bool upper_ = false;
};

using FieldPtr = std::shared_ptr<const NumberField>;

/* One computation pipeline runs in exactly one mode: exact over a field, or
   machine doubles with a documented 1e-12 sign tolerance. */
struct ScalarMode {
    FieldPtr field;                       // null => Float mode
    bool is_exact() const { return field != nullptr; }
    static ScalarMode exact(FieldPtr f) { return ScalarMode{std::move(f)}; }
    static ScalarMode flt() { return ScalarMode{nullptr}; }
};

constexpr double kFloatSignTol = 1e-12;

/* Element of Q(theta) in canonical form (coefficient vector c0..c_{d-1}),
   or a double in Float mode. */
class Scalar {
public:
    Scalar() : f_(0.0) {}
    static Scalar exact(FieldPtr fld, std::vector<Rat> coeffs);
    static Scalar from_rat(const ScalarMode& m, const Rat& r);
    static Scalar from_double(double v) { Scalar s; s.f_ = v; return s; }

    bool is_float() const { return !fld_; }
    const FieldPtr& field() const { return fld_; }
    const std::vector<Rat>& coeffs() const { return c_; }
    double raw_float() const { return f_; }

    bool is_exact_zero() const;

private:
    FieldPtr fld_;            // null in Float mode
    std::vector<Rat> c_;      // size = degree in exact mode
    double f_ = 0.0;
    friend Scalar s_add(const Scalar&, const Scalar&);
    friend Scalar s_sub(const Scalar&, const Scalar&);
    friend Scalar s_neg(const Scalar&);
    friend Scalar s_mul(const Scalar&, const Scalar&);
    friend Scalar s_div(const Scalar&, const Scalar&);
    friend Scalar s_scale(const Scalar&, const Rat&);
};

Scalar s_add(const Scalar& a, const Scalar& b);
Scalar s_sub(const Scalar& a, const Scalar& b);
Scalar s_neg(const Scalar& a);
Scalar s_mul(const Scalar& a, const Scalar& b);
Scalar s_div(const Scalar& a, const Scalar& b);      // DivByZero
Scalar s_scale(const Scalar& a, const Rat& r);

/* sign of the real embedding: exact (interval refinement for degree >= 3,
   closed form for degree <= 2); Float mode uses the 1e-12 tolerance. */
int s_sign(const Scalar& a);
inline Scalar s_abs(const Scalar& a) { return s_sign(a) < 0 ? s_neg(a) : a; }
inline int s_cmp(const Scalar& a, const Scalar& b) { return s_sign(s_sub(a, b)); }
inline bool s_is_zero(const Scalar& a) { return s_sign(a) == 0; }

/* true iff the element lies in Q (all theta-coefficients vanish);
   Float mode: continued-fraction heuristic, denominator cap 1e6, tol 1e-12. */
bool s_is_rational(const Scalar& a);

/* exact value when s_is_rational (exact mode) */
Rat s_to_rat(const Scalar& a);
bool s_is_integer(const Scalar& a);

Int s_floor(const Scalar& a);
inline Int s_round(const Scalar& a) {
    if (a.is_float()) { Int r; mpz_set_d(r.get_mpz_t(), std::floor(a.raw_float() + 0.5)); return r; }
    return s_floor(s_add(a, Scalar::from_rat(ScalarMode::exact(a.field()), Rat(1, 2))));
}

/* double approximation with dynamic internal precision (huge exact
   coefficients cancel catastrophically in naive double evaluation) */
double s_to_double(const Scalar& a);

bool s_equal(const Scalar& a, const Scalar& b);      // representation equality
std::string s_repr(const Scalar& a);                 // canonical string (registry keys, JSON)

/* shared-mode helpers */
ScalarMode mode_of(const Scalar& a);
void check_same_field(const Scalar& a, const Scalar& b);   // FieldMismatch

} // namespace fixsplit
