#pragma once
#include <functional>
#include "fixsplit/twist.hpp"

namespace fixsplit {

struct SearchBudget {
    Rat eps_prime = Rat(1, 100);          // the epsilon' driving (P), (Q), (R)
    long max_convergents = 400;
    Int max_circumference_shift = Int(1); // see make_default_budget
    long max_scans = 200000;              // work cap per enumeration pass
};

SearchBudget make_default_budget();
SearchBudget doubled(const SearchBudget& b);   // retry escalation

/* vc = t + m w over |m| <= max shift with dot(vc, w) > 0 minimizing the
   angle measure to w; |cross(vc, w)| = area(C) exactly. */
Vec choose_vc(const FixSplitting& s, const SearchBudget& budget);

/* Enumerate candidate triples in canonical order, cheapest tests first:
   v from the directional-convergent family (records p_n and mixes p_m + j p_n),
   vc = sigma_c t + M w resonance-matched to v per candidate.  Calls visit for
   every triple passing (P), (Q), (R) at (eps_rel, eps_abs); stops when visit
   returns true.  Returns true iff stopped, false when the family is exhausted
   or max_scans candidates were examined (the family is infinite, so every
   pass needs a work cap).  scanned = number of candidate v examined so far. */
bool stream_partner_candidates(
    const FixSplitting& s, const Rat& eps_rel, const Rat& eps_abs,
    long max_convergents, const Int& max_shift,
    const std::function<bool(const PartnerTriple&, long scanned)>& visit,
    long max_scans = 200000);

/* First triple passing (P), (Q), (R) at eps_rel = eps_abs = eps_prime, plus
   good_partners whenever eps_prime <= 1/36.
   Throws BudgetExhausted (retryable) / RationalDirection. */
PartnerTriple search(const FixSplitting& s, const SearchBudget& budget);

} // namespace fixsplit
