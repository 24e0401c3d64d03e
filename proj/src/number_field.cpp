#include "fixsplit/number_field.hpp"
#include <algorithm>
#include <cmath>
#include <sstream>

namespace fixsplit {

/* ---------------- rational parsing / formatting ---------------- */

Rat rat_from_string(const std::string& s0) {
    std::string s = s0;
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.empty()) throw err("ParseError", "empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rat r;
        if (r.set_str(s, 10) != 0) throw err("ParseError", "bad rational '" + s0 + "'");
        if (r.get_den() == 0) throw err("ParseError", "zero denominator in '" + s0 + "'");
        r.canonicalize();
        return r;
    }
    /* integer or decimal with optional exponent */
    std::string mant = s;
    long expo = 0;
    auto e = s.find_first_of("eE");
    if (e != std::string::npos) {
        mant = s.substr(0, e);
        try { expo = std::stol(s.substr(e + 1)); }
        catch (...) { throw err("ParseError", "bad exponent in '" + s0 + "'"); }
    }
    std::string digits = mant;
    long frac_digits = 0;
    auto dot = mant.find('.');
    if (dot != std::string::npos) {
        digits = mant.substr(0, dot) + mant.substr(dot + 1);
        frac_digits = static_cast<long>(mant.size() - dot - 1);
    }
    if (digits.empty() || digits == "-" || digits == "+") throw err("ParseError", "bad number '" + s0 + "'");
    Int num;
    if (mpz_set_str(num.get_mpz_t(), digits.c_str(), 10) != 0)
        throw err("ParseError", "bad number '" + s0 + "'");
    Rat r(num);
    long p10 = expo - frac_digits;
    Int ten10;
    mpz_ui_pow_ui(ten10.get_mpz_t(), 10, static_cast<unsigned long>(p10 < 0 ? -p10 : p10));
    if (p10 >= 0) r *= Rat(ten10);
    else r /= Rat(ten10);
    r.canonicalize();
    return r;
}

std::string rat_to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/* ---------------- polynomial helpers over Rat ---------------- */

namespace {

using Poly = std::vector<Rat>;  // c0..cd

int poly_deg(const Poly& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (p[static_cast<size_t>(i)] != 0) return i;
    return -1;
}

Rat poly_eval(const Poly& p, const Rat& x) {
    Rat acc = 0;
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) acc = acc * x + p[static_cast<size_t>(i)];
    return acc;
}

Poly poly_deriv(const Poly& p) {
    Poly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rat(static_cast<long>(i)));
    if (d.empty()) d.push_back(Rat(0));
    return d;
}

/* remainder of a by b (b nonzero) */
Poly poly_rem(Poly a, const Poly& b) {
    int db = poly_deg(b);
    Rat lead = b[static_cast<size_t>(db)];
    int da = poly_deg(a);
    while (da >= db && da >= 0) {
        Rat f = a[static_cast<size_t>(da)] / lead;
        for (int i = 0; i <= db; ++i)
            a[static_cast<size_t>(da - db + i)] -= f * b[static_cast<size_t>(i)];
        a[static_cast<size_t>(da)] = 0;
        da = poly_deg(a);
    }
    a.resize(static_cast<size_t>(std::max(da + 1, 1)));
    return a;
}

/* number of real roots in (a, b] via Sturm chain sign changes */
int sturm_count(const Poly& p, const Rat& a, const Rat& b) {
    std::vector<Poly> chain{p, poly_deriv(p)};
    while (poly_deg(chain.back()) > 0) {
        Poly r = poly_rem(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        if (poly_deg(r) < 0) break;
        chain.push_back(r);
    }
    auto changes = [&](const Rat& x) {
        int n = 0, prev = 0;
        for (const auto& q : chain) {
            int s = sign_of(poly_eval(q, x));
            if (s != 0) { if (prev != 0 && s != prev) ++n; prev = s; }
        }
        return n;
    };
    return changes(a) - changes(b);
}

/* monic integer polynomial irreducibility over Q, degree 1..4 */
bool monic_irreducible(const std::vector<Int>& c) {
    int d = static_cast<int>(c.size()) - 1;
    if (d == 1) return true;
    /* rational roots are integer divisors of c0 (monic) */
    Int c0 = c[0];
    if (c0 == 0) return false;
    Int a = abs(c0);
    for (Int t = 1; t * t <= a; ++t) {
        if (a % t != 0) continue;
        const Int cands[4] = {t, Int(-t), Int(a / t), Int(-(a / t))};
        for (const Int& root : cands) {
            Rat v = 0;
            for (int i = d; i >= 0; --i) v = v * Rat(root) + Rat(c[static_cast<size_t>(i)]);
            if (v == 0) return false;
        }
    }
    if (d <= 3) return true;  // degree 2,3: reducible iff rational root
    /* degree 4: also exclude factorization into two integer monic quadratics
       (x^2+px+q)(x^2+rx+s); Gauss: rational factorization implies integer one */
    Int A = c[3], B = c[2], C = c[1], D = c[0];
    Int aD = abs(D);
    for (Int q = 1; q * q <= aD; ++q) {
        if (aD % q != 0) continue;
        const Int qcands[4] = {q, Int(-q), Int(aD / q), Int(-(aD / q))};
        for (const Int& qq : qcands) {
            if (qq == 0) continue;
            Int s = D / qq;
            /* p + r = A, p r = B - q - s, p s + q r = C */
            Int pr = B - qq - s;
            Int disc = A * A - 4 * pr;
            if (!is_perfect_square(disc)) continue;
            Int rt = isqrt_floor(disc);
            for (int pm = 0; pm < 2; ++pm) {
                Int twop = pm ? Int(A + rt) : Int(A - rt);
                if (twop % 2 != 0) continue;
                Int p = twop / 2, r = A - p;
                if (p * s + qq * r == C) return false;
            }
        }
    }
    return true;
}

} // namespace

/* ---------------- NumberField ---------------- */

int NumberField::poly_sign(const Rat& x) const {
    Rat v = 0;
    for (int i = degree_; i >= 0; --i) v = v * x + Rat(poly_[static_cast<size_t>(i)]);
    return sign_of(v);
}

std::shared_ptr<const NumberField> NumberField::make(std::vector<Int> poly, Rat lo, Rat hi) {
    if (poly.size() < 2 || poly.size() > 5)
        throw err("FieldDegree", "min_poly degree must be 1..4");
    if (poly.back() != 1) throw err("FieldNotMonic", "min_poly must be monic");
    if (!(lo < hi)) throw err("FieldInterval", "root interval must satisfy lo < hi");
    auto f = std::shared_ptr<NumberField>(new NumberField());
    f->poly_ = std::move(poly);
    f->lo_ = std::move(lo);
    f->hi_ = std::move(hi);
    f->degree_ = static_cast<int>(f->poly_.size()) - 1;
    if (!monic_irreducible(f->poly_))
        throw err("FieldReducible", "min_poly is reducible over Q");
    int slo = f->poly_sign(f->lo_), shi = f->poly_sign(f->hi_);
    if (f->degree_ >= 2 && (slo == 0 || shi == 0))
        throw err("FieldInterval", "root interval endpoint is a root");
    if (f->degree_ >= 2 && slo == shi)
        throw err("FieldInterval", "min_poly does not change sign on the root interval");
    Poly p;
    for (const Int& ci : f->poly_) p.push_back(Rat(ci));
    Rat lin_root = -Rat(f->poly_[0]);
    int nroots = (f->degree_ == 1) ? ((f->lo_ < lin_root && lin_root < f->hi_) ? 1 : 0)
                                   : sturm_count(p, f->lo_, f->hi_);
    if (nroots != 1)
        throw err("FieldInterval", "root interval must isolate exactly one real root");
    if (f->degree_ == 2) {
        f->qp_ = f->poly_[1];
        f->qq_ = f->poly_[0];
        f->qdisc_ = f->qp_ * f->qp_ - 4 * f->qq_;
        /* real quadratic: disc > 0 (disc = 0 or square would be reducible) */
        if (f->qdisc_ <= 0) throw err("FieldInterval", "quadratic has no real roots");
        /* the isolated root is the upper one iff min_poly(lo) < 0 */
        f->upper_ = (f->poly_sign(f->lo_) < 0);
    }
    return f;
}

/* ---------------- Scalar construction ---------------- */

Scalar Scalar::exact(FieldPtr fld, std::vector<Rat> coeffs) {
    if (!fld) throw err("FieldMismatch", "exact scalar needs a field");
    if (coeffs.size() > static_cast<size_t>(fld->degree()))
        throw err("FieldMismatch", "too many coefficients for field degree");
    Scalar s;
    coeffs.resize(static_cast<size_t>(fld->degree()), Rat(0));
    s.fld_ = std::move(fld);
    s.c_ = std::move(coeffs);
    return s;
}

Scalar Scalar::from_rat(const ScalarMode& m, const Rat& r) {
    if (!m.is_exact()) return from_double(r.get_d());
    std::vector<Rat> c(static_cast<size_t>(m.field->degree()), Rat(0));
    c[0] = r;
    return exact(m.field, std::move(c));
}

bool Scalar::is_exact_zero() const {
    if (is_float()) return f_ == 0.0;
    for (const auto& x : c_) if (x != 0) return false;
    return true;
}

ScalarMode mode_of(const Scalar& a) { return ScalarMode{a.field()}; }

void check_same_field(const Scalar& a, const Scalar& b) {
    if (a.is_float() != b.is_float())
        throw err("FieldMismatch", "mixed exact/float scalars");
    if (!a.is_float() && a.field().get() != b.field().get())
        throw err("FieldMismatch", "scalars from different fields");
}

/* ---------------- arithmetic ---------------- */

Scalar s_add(const Scalar& a, const Scalar& b) {
    check_same_field(a, b);
    if (a.is_float()) return Scalar::from_double(a.f_ + b.f_);
    Scalar r = a;
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
    return r;
}

Scalar s_sub(const Scalar& a, const Scalar& b) {
    check_same_field(a, b);
    if (a.is_float()) return Scalar::from_double(a.f_ - b.f_);
    Scalar r = a;
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
    return r;
}

Scalar s_neg(const Scalar& a) {
    if (a.is_float()) return Scalar::from_double(-a.f_);
    Scalar r = a;
    for (auto& x : r.c_) x = -x;
    return r;
}

Scalar s_scale(const Scalar& a, const Rat& k) {
    if (a.is_float()) return Scalar::from_double(a.f_ * k.get_d());
    Scalar r = a;
    for (auto& x : r.c_) x *= k;
    return r;
}

Scalar s_mul(const Scalar& a, const Scalar& b) {
    check_same_field(a, b);
    if (a.is_float()) return Scalar::from_double(a.f_ * b.f_);
    const int d = a.fld_->degree();
    if (d == 1) {
        Scalar r = a;
        r.c_[0] *= b.c_[0];
        return r;
    }
    /* polynomial product, then reduce modulo the monic min_poly */
    std::vector<Rat> prod(static_cast<size_t>(2 * d - 1), Rat(0));
    for (int i = 0; i < d; ++i) {
        if (a.c_[static_cast<size_t>(i)] == 0) continue;
        for (int j = 0; j < d; ++j)
            prod[static_cast<size_t>(i + j)] += a.c_[static_cast<size_t>(i)] * b.c_[static_cast<size_t>(j)];
    }
    const auto& mp = a.fld_->poly();
    for (int k = 2 * d - 2; k >= d; --k) {
        Rat f = prod[static_cast<size_t>(k)];
        if (f == 0) continue;
        prod[static_cast<size_t>(k)] = 0;
        for (int i = 0; i < d; ++i)
            prod[static_cast<size_t>(k - d + i)] -= f * Rat(mp[static_cast<size_t>(i)]);
    }
    prod.resize(static_cast<size_t>(d));
    Scalar r;
    r.fld_ = a.fld_;
    r.c_ = std::move(prod);
    return r;
}

Scalar s_div(const Scalar& a, const Scalar& b) {
    check_same_field(a, b);
    if (a.is_float()) {
        if (b.f_ == 0.0) throw err("DivByZero", "division by zero");
        return Scalar::from_double(a.f_ / b.f_);
    }
    if (b.is_exact_zero()) throw err("DivByZero", "division by zero");
    const int d = b.fld_->degree();
    if (d == 1) {
        Scalar r = a;
        r.c_[0] /= b.c_[0];
        return r;
    }
    if (d == 2) {
        /* conjugate over x^2 + p x + q: (b0 + b1 t)^-1 = (b0 - p b1 - b1 t)/N */
        Rat p(b.fld_->quad_p()), q(b.fld_->quad_q());
        Rat n = b.c_[0] * b.c_[0] - p * b.c_[0] * b.c_[1] + q * b.c_[1] * b.c_[1];
        Scalar inv = Scalar::exact(b.fld_, {(b.c_[0] - p * b.c_[1]) / n, -b.c_[1] / n});
        return s_mul(a, inv);
    }
    /* extended Euclid in Q[x] against the (irreducible) min_poly */
    Poly bp(b.c_.begin(), b.c_.end());
    Poly mp;
    for (const Int& ci : b.fld_->poly()) mp.push_back(Rat(ci));
    Poly r0 = mp, r1 = bp, s0{Rat(0)}, s1{Rat(1)};
    while (poly_deg(r1) > 0) {
        /* quotient of r0 by r1 */
        Poly quo(static_cast<size_t>(std::max(poly_deg(r0) - poly_deg(r1) + 1, 1)), Rat(0));
        Poly rem = r0;
        int db = poly_deg(r1);
        Rat lead = r1[static_cast<size_t>(db)];
        int da = poly_deg(rem);
        while (da >= db && da >= 0) {
            Rat f = rem[static_cast<size_t>(da)] / lead;
            quo[static_cast<size_t>(da - db)] = f;
            for (int i = 0; i <= db; ++i)
                rem[static_cast<size_t>(da - db + i)] -= f * r1[static_cast<size_t>(i)];
            rem[static_cast<size_t>(da)] = 0;
            da = poly_deg(rem);
        }
        /* s2 = s0 - quo*s1 */
        Poly s2(std::max(s0.size(), quo.size() + s1.size()), Rat(0));
        for (size_t i = 0; i < s0.size(); ++i) s2[i] = s0[i];
        for (size_t i = 0; i < quo.size(); ++i)
            for (size_t j = 0; j < s1.size(); ++j) s2[i + j] -= quo[i] * s1[j];
        r0 = r1; r1 = rem; s0 = s1; s1 = s2;
    }
    /* r1 is a nonzero constant (min_poly irreducible) */
    Rat cst = r1[0];
    std::vector<Rat> inv(static_cast<size_t>(d), Rat(0));
    for (size_t i = 0; i < s1.size() && i < inv.size(); ++i) inv[i] = s1[i] / cst;
    return s_mul(a, Scalar::exact(b.fld_, std::move(inv)));
}

/* ---------------- sign ---------------- */

namespace {

/* sign of A + B*sqrt(N), N > 0 not a perfect square (or any N >= 0) */
int quad_surd_sign(const Rat& A, const Rat& B, const Int& N) {
    int sa = sign_of(A), sb = sign_of(B);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    Rat d = A * A - B * B * Rat(N);
    return sa * sign_of(d);
}

struct RatInterval { Rat lo, hi; };

RatInterval iv_mul(const RatInterval& a, const RatInterval& b) {
    Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}

RatInterval eval_interval(const std::vector<Rat>& c, const RatInterval& t) {
    RatInterval acc{Rat(0), Rat(0)};
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
        acc = iv_mul(acc, t);
        acc.lo += c[static_cast<size_t>(i)];
        acc.hi += c[static_cast<size_t>(i)];
    }
    return acc;
}

/* refine the field's root interval until the element's interval excludes 0
   (caller guarantees the element is nonzero); returns its sign.
   If rel_width is set, instead refine until hi-lo < rel_width * max(|mid|,tiny)
   and report via out. */
int interval_sign(const Scalar& a) {
    const auto& f = *a.field();
    Rat lo = f.lo(), hi = f.hi();
    int slo = f.poly_sign(lo);
    for (int iter = 0; iter < 100000; ++iter) {
        RatInterval v = eval_interval(a.coeffs(), {lo, hi});
        if (sign_of(v.lo) > 0) return 1;
        if (sign_of(v.hi) < 0) return -1;
        Rat mid = (lo + hi) / 2;
        int sm = f.poly_sign(mid);   // nonzero: irreducible deg>=2 has no rational root
        if (sm == slo) lo = mid; else hi = mid;
    }
    throw err("SignRefinement", "interval sign refinement did not converge");
}

} // namespace

int s_sign(const Scalar& a) {
    if (a.is_float()) {
        if (std::abs(a.raw_float()) <= kFloatSignTol) return 0;
        return a.raw_float() > 0 ? 1 : -1;
    }
    if (a.is_exact_zero()) return 0;
    const int d = a.field()->degree();
    if (d == 1) return sign_of(a.coeffs()[0]);
    if (d == 2) {
        /* a0 + a1*theta, theta = (-p + s*sqrt(disc))/2 */
        const auto& f = *a.field();
        Rat A = a.coeffs()[0] - a.coeffs()[1] * Rat(f.quad_p()) / 2;
        Rat B = a.coeffs()[1] / 2;
        if (!f.root_is_upper()) B = -B;
        return quad_surd_sign(A, B, f.quad_disc());
    }
    return interval_sign(a);
}

/* ---------------- rationality, floor, conversion ---------------- */

namespace {

/* documented float-mode heuristic: CF reconstruction, den <= 1e6, tol 1e-12 */
bool float_to_rat(double x, Rat& out) {
    double p0 = 1, q0 = 0, p1 = std::floor(x), q1 = 1, y = x - p1;
    for (int it = 0; it < 64 && q1 <= 1e6; ++it) {
        if (std::abs(x - p1 / q1) <= 1e-12 * std::max(1.0, std::abs(x))) {
            Int num, den;
            mpz_set_d(num.get_mpz_t(), p1);
            mpz_set_d(den.get_mpz_t(), q1);
            out = Rat(num) / Rat(den);
            out.canonicalize();
            return true;
        }
        if (std::abs(y) < 1e-15) break;
        y = 1.0 / y;
        double an = std::floor(y);
        y -= an;
        double p2 = an * p1 + p0, q2 = an * q1 + q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    }
    return false;
}

} // namespace

bool s_is_rational(const Scalar& a) {
    if (!a.is_float()) {
        for (size_t i = 1; i < a.coeffs().size(); ++i)
            if (a.coeffs()[i] != 0) return false;
        return true;
    }
    Rat r;
    return float_to_rat(a.raw_float(), r);
}

Rat s_to_rat(const Scalar& a) {
    if (a.is_float()) {
        Rat r;
        if (!float_to_rat(a.raw_float(), r))
            throw err("NotRational", "float does not reconstruct as a small rational");
        return r;
    }
    if (!s_is_rational(a)) throw err("NotRational", "element has irrational part");
    return a.coeffs()[0];
}

bool s_is_integer(const Scalar& a) {
    if (a.is_float()) {
        double r = std::round(a.raw_float());
        return std::abs(a.raw_float() - r) <= kFloatSignTol;
    }
    return s_is_rational(a) && a.coeffs()[0].get_den() == 1;
}

Int s_floor(const Scalar& a) {
    if (a.is_float()) {
        Int r;
        mpz_set_d(r.get_mpz_t(), std::floor(a.raw_float()));
        return r;
    }
    const int d = a.field()->degree();
    if (d == 1 || s_is_rational(a)) return floor_rat(a.coeffs()[0]);
    if (d == 2) {
        /* x = A + B*sqrt(disc), A = a0 - a1 p/2, B = +-a1/2; with common
           denominator D: x = (P + s*sqrt(N))/D, N = (B*D)^2*disc */
        const auto& f = *a.field();
        Rat A = a.coeffs()[0] - a.coeffs()[1] * Rat(f.quad_p()) / 2;
        Rat B = a.coeffs()[1] / 2;
        if (!f.root_is_upper()) B = -B;
        Int D = lcm(A.get_den(), B.get_den());
        Int P = A.get_num() * (D / A.get_den());
        Int Bi = B.get_num() * (D / B.get_den());
        Int N = Bi * Bi * f.quad_disc();
        Int m = isqrt_floor(N);
        if (Bi < 0) {
            m = -m;
            if (!is_perfect_square(N)) m -= 1;
        }
        Int pm = P + m;
        return floor_div(pm, D);
    }
    /* general: refine until the rational bounds agree on the floor */
    const auto& f = *a.field();
    Rat lo = f.lo(), hi = f.hi();
    int slo = f.poly_sign(lo);
    for (int iter = 0; iter < 100000; ++iter) {
        RatInterval v = eval_interval(a.coeffs(), {lo, hi});
        Int flo = floor_rat(v.lo), fhi = floor_rat(v.hi);
        if (flo == fhi) return flo;
        Rat mid = (lo + hi) / 2;
        int sm = f.poly_sign(mid);
        if (sm == slo) lo = mid; else hi = mid;
    }
    throw err("SignRefinement", "floor refinement did not converge");
}

double s_to_double(const Scalar& a) {
    if (a.is_float()) return a.raw_float();
    const int d = a.field()->degree();
    if (d == 1 || s_is_rational(a)) return a.coeffs()[0].get_d();
    if (d == 2) {
        const auto& f = *a.field();
        Rat A = a.coeffs()[0] - a.coeffs()[1] * Rat(f.quad_p()) / 2;
        Rat B = a.coeffs()[1] / 2;
        if (!f.root_is_upper()) B = -B;
        size_t bits = mpz_sizeinbase(A.get_num().get_mpz_t(), 2) + mpz_sizeinbase(A.get_den().get_mpz_t(), 2)
                    + mpz_sizeinbase(B.get_num().get_mpz_t(), 2) + mpz_sizeinbase(B.get_den().get_mpz_t(), 2);
        mpf_set_default_prec(bits + 128);
        mpf_class Af(A), Bf(B), Df(f.quad_disc());
        mpf_class root = sqrt(Df);
        mpf_class val = Af + Bf * root;
        return val.get_d();
    }
    /* refine to ~2^-80 relative width */
    const auto& f = *a.field();
    Rat lo = f.lo(), hi = f.hi();
    int slo = f.poly_sign(lo);
    RatInterval v{Rat(0), Rat(0)};
    const Int two62 = Int(1) << 62;
    for (int iter = 0; iter < 100000; ++iter) {
        v = eval_interval(a.coeffs(), {lo, hi});
        Rat w = v.hi - v.lo;
        Rat mag = abs(v.hi) + abs(v.lo);
        Rat scaled = w * Rat(two62);
        if (scaled < mag || (mag == 0 && w == 0)) break;
        Rat mid = (lo + hi) / 2;
        int sm = f.poly_sign(mid);
        if (sm == slo) lo = mid; else hi = mid;
    }
    Rat mid = (v.lo + v.hi) / 2;
    return mid.get_d();
}

bool s_equal(const Scalar& a, const Scalar& b) {
    if (a.is_float() != b.is_float()) return false;
    if (a.is_float()) return a.raw_float() == b.raw_float();
    if (a.field().get() != b.field().get()) return false;
    return a.coeffs() == b.coeffs();
}

std::string s_repr(const Scalar& a) {
    if (a.is_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", a.raw_float());
        return buf;
    }
    std::ostringstream os;
    for (size_t i = 0; i < a.coeffs().size(); ++i) {
        if (i) os << '|';
        os << rat_to_string(a.coeffs()[i]);
    }
    return os.str();
}

} // namespace fixsplit
