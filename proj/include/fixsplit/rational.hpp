#pragma once
#include <gmpxx.h>
#include <string>
#include "fixsplit/errors.hpp"

namespace fixsplit {

using Int = mpz_class;
using Rat = mpq_class;

inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int floor_rat(const Rat& r) { return floor_div(r.get_num(), r.get_den()); }

inline Int round_rat(const Rat& r) { return floor_rat(r + Rat(1, 2)); }

/* floor(sqrt(n)) for n >= 0 */
inline Int isqrt_floor(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_perfect_square(const Int& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline int sign_of(const Rat& r) { return sgn(r); }

/* Parse "p/q", integer, or decimal ("1.25", "-3e-2") strings into exact rationals. */
Rat rat_from_string(const std::string& s);

/* Canonical "p/q" (or "p" when the denominator is 1). */
std::string rat_to_string(const Rat& r);

} // namespace fixsplit
