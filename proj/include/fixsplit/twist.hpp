#pragma once
#include <optional>
#include <utility>
#include <vector>
#include "fixsplit/splitting.hpp"

namespace fixsplit {

/* Primitive triple (v1 in Lat1, v2 in Lat2, vc in Lat_c) with consistent
   orientation sigma: sigma * cross(v_j, w) > 0 for all three. */
struct PartnerTriple {
    Vec v1, v2, vc;
    int orientation = +1;
};

/* Validates membership, primitivity, nonzero cross products with w,
   orientation consistency, and the embedding bounds |cross(v_j, w)| <= area_j.
   Throws InvalidPartners with the failing condition. */
PartnerTriple make_partner_triple(const FixSplitting& s,
                                  const Vec& v1, const Vec& v2, const Vec& vc);

/* 4|v_a x v_b| < (1/9) min(|v_a x w|, |v_b x w|) for the three pairs
   (v1,v2), (v1,vc), (v2,vc); exact strict inequalities. */
bool good_partners(const FixSplitting& s, const PartnerTriple& p);

/* w + k (v1 + v2 + 2 vc) */
Vec twist_vector(const Vec& w, const PartnerTriple& p, long k);

/* all six cross(v_j, w), cross(v_j, w^k) strictly share one sign */
bool same_side(const FixSplitting& s, const PartnerTriple& p, long k);

/* (2|v1 x w| + |k| (|v1 x v2| + 2|v1 x vc|),  same with indices swapped) */
std::pair<Scalar, Scalar> area_exchange_bound(const FixSplitting& s,
                                              const PartnerTriple& p, long k);

struct TwistPlan {
    PartnerTriple partners;
    long k = 0;
    Vec w_new;
    std::pair<Scalar, Scalar> bounds;   // area_exchange_bound values
};

TwistPlan make_twist_plan(const FixSplitting& s, const PartnerTriple& p, long k);

/* Dehn twist along the concatenated core curve:
   w' = w^k, lat_i' = <v_i, u_i + k (v_other + 2 vc)> with u_i the
   sigma-oriented basis completion of v_i, cyl' = <w', vc> with circumference w'.
   Postconditions (checked): result validates, total area conserved exactly,
   w' primitive in cyl'. Throws SameSideViolated / ResultInvalid / ZeroTwist. */
FixSplitting apply_twist(const FixSplitting& s, const PartnerTriple& p, long k);

/* k = 1..9 then -1..-9; keeps every k whose apply_twist succeeds and whose
   result is an irrational splitting. Guaranteed to contain both signs when
   the preconditions (irrational s, good partners) hold; a miss raises
   GuaranteeViolated. Pre violations throw RationalSplitting / NotGoodPartners. */
std::vector<std::pair<long, FixSplitting>>
select_irrational_twists(const FixSplitting& s, const PartnerTriple& p);

} // namespace fixsplit
