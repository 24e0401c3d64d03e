#pragma once

/* Reference computations the tests pin library results against.  Everything
   here is written against raw GMP rationals / native integers with none of
   the library's scalar machinery, so the two sides cannot share bugs. */

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracles {

using Rat = mpq_class;

/* exact rational Horner evaluation of c0 + c1 t + ... at t */
inline Rat poly_eval(const std::vector<Rat>& c, const Rat& t) {
    Rat acc(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
}

/* Sign of sum_i coeffs[i] theta^i where theta is the unique root of min_poly
   inside (lo, hi).  Bisects the root interval in exact rational arithmetic to
   width 10^-100 and decides via |p(mid)| > max|p'| * width, so every nonzero
   verdict carries a 100-digit interval certificate.  A zero element has all
   coefficients zero (the representation degree is below deg(min_poly)). */
inline int algebraic_sign(const std::vector<Rat>& min_poly, Rat lo, Rat hi,
                          const std::vector<Rat>& coeffs) {
    bool all_zero = true;
    for (const Rat& c : coeffs) all_zero = all_zero && c == 0;
    if (all_zero) return 0;

    Rat flo = poly_eval(min_poly, lo);
    if (flo == 0) throw std::runtime_error("oracle: rational root endpoint");
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, 100);
    const Rat width_target = Rat(1) / Rat(ten_pow);

    for (int rounds = 0; rounds < 8; ++rounds) {
        while (hi - lo > width_target) {
            Rat mid = (lo + hi) / 2;
            Rat fm = poly_eval(min_poly, mid);
            if (fm == 0) throw std::runtime_error("oracle: hit rational root");
            if ((fm < 0) == (flo < 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        Rat mid = (lo + hi) / 2;
        Rat val = poly_eval(coeffs, mid);
        Rat m = abs(lo) > abs(hi) ? abs(lo) : abs(hi);
        Rat deriv_bound(0), mpow(1);
        for (size_t i = 1; i < coeffs.size(); ++i) {
            deriv_bound += Rat(static_cast<long>(i)) * abs(coeffs[i]) * mpow;
            mpow *= m;
        }
        if (abs(val) > deriv_bound * (hi - lo)) return val < 0 ? -1 : 1;
        hi = lo + (hi - lo) / Rat(ten_pow);  // undecided: 100 more digits
    }
    throw std::runtime_error("oracle: sign undecided after 800 digits");
}

/* --- exact Z[sqrt2] helpers on native integers (oracle-private) ---------- */

struct Q2 {
    long long a = 0, b = 0;  // a + b sqrt(2)
};

inline Q2 q2_add(Q2 x, Q2 y) { return {x.a + y.a, x.b + y.b}; }
inline Q2 q2_sub(Q2 x, Q2 y) { return {x.a - y.a, x.b - y.b}; }
inline Q2 q2_mul(Q2 x, Q2 y) { return {x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a}; }
inline Q2 q2_scale(long long c, Q2 x) { return {c * x.a, c * x.b}; }

inline int q2_sign(Q2 x) {
    if (x.a == 0 && x.b == 0) return 0;
    if (x.a >= 0 && x.b >= 0) return 1;
    if (x.a <= 0 && x.b <= 0) return -1;
    __int128 a2 = static_cast<__int128>(x.a) * x.a;
    __int128 b2 = 2 * static_cast<__int128>(x.b) * x.b;
    if (x.a > 0) return a2 > b2 ? 1 : -1;  // a > 0 > b
    return a2 > b2 ? -1 : 1;               // b > 0 > a
}

inline Q2 q2_abs(Q2 x) { return q2_sign(x) < 0 ? Q2{-x.a, -x.b} : x; }
inline int q2_cmp(Q2 x, Q2 y) { return q2_sign(q2_sub(x, y)); }

struct Q2Vec {
    Q2 x, y;
};

inline Q2 q2_cross(const Q2Vec& u, const Q2Vec& v) {
    return q2_sub(q2_mul(u.x, v.y), q2_mul(u.y, v.x));
}
inline Q2 q2_dot(const Q2Vec& u, const Q2Vec& v) {
    return q2_add(q2_mul(u.x, v.x), q2_mul(u.y, v.y));
}

/* Brute-force scan of nonzero a*b1 + b*b2 over |a|,|b| <= box.  Returns the
   minimal |cross(., w)| among vectors with squared length <= len2_cap, or the
   overall minimum when len2_cap is null.  Entries must stay small enough that
   every product above fits long long; the instance generators guarantee it. */
inline Q2 box_min_cross(const Q2Vec& b1, const Q2Vec& b2, const Q2Vec& w, long box,
                        const Q2* len2_cap) {
    const Q2 c1 = q2_cross(b1, w), c2 = q2_cross(b2, w);
    const Q2 g11 = q2_dot(b1, b1), g12 = q2_dot(b1, b2), g22 = q2_dot(b2, b2);
    bool have = false;
    Q2 best{};
    for (long a = -box; a <= box; ++a)
        for (long b = -box; b <= box; ++b) {
            if (a == 0 && b == 0) continue;
            if (len2_cap) {
                Q2 l2 = q2_add(q2_add(q2_scale(a * a, g11), q2_scale(2 * a * b, g12)),
                               q2_scale(b * b, g22));
                if (q2_cmp(l2, *len2_cap) > 0) continue;
            }
            Q2 cr = q2_abs(q2_add(q2_scale(a, c1), q2_scale(b, c2)));
            if (!have || q2_cmp(cr, best) < 0) {
                best = cr;
                have = true;
            }
        }
    if (!have) throw std::runtime_error("oracle: empty box");
    return best;
}

/* true iff some nonzero a*b1 + b*b2 with |a|,|b| <= box is parallel to w */
inline bool box_has_parallel(const Q2Vec& b1, const Q2Vec& b2, const Q2Vec& w, long box) {
    const Q2 c1 = q2_cross(b1, w), c2 = q2_cross(b2, w);
    for (long a = -box; a <= box; ++a)
        for (long b = -box; b <= box; ++b) {
            if (a == 0 && b == 0) continue;
            if (q2_sign(q2_add(q2_scale(a, c1), q2_scale(b, c2))) == 0) return true;
        }
    return false;
}

}  // namespace oracles
