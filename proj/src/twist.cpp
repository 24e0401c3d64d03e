#include "fixsplit/twist.hpp"

namespace fixsplit {

PartnerTriple make_partner_triple(const FixSplitting& s,
                                  const Vec& v1, const Vec& v2, const Vec& vc) {
    struct Entry { const Vec* v; const Lattice* lat; const char* name; };
    const Entry entries[3] = {{&v1, &s.lat1, "v1"}, {&v2, &s.lat2, "v2"}, {&vc, &s.cyl.lattice, "vc"}};
    int sigma = 0;
    for (const auto& e : entries) {
        bool prim;
        try {
            prim = is_primitive(*e.lat, *e.v);
        } catch (const Error&) {
            throw err("InvalidPartners", std::string(e.name) + " is not a lattice point");
        }
        if (!prim) throw err("InvalidPartners", std::string(e.name) + " is not primitive");
        int sg = s_sign(cross(*e.v, s.w));
        if (sg == 0) throw err("InvalidPartners", std::string(e.name) + " is parallel to w");
        if (sigma == 0) sigma = sg;
        else if (sg != sigma) throw err("InvalidPartners", "inconsistent orientation signs");
    }
    Areas a = areas(s);
    const Scalar* caps[3] = {&a.a1, &a.a2, &a.ac};
    for (int i = 0; i < 3; ++i) {
        if (s_cmp(s_abs(cross(*entries[i].v, s.w)), *caps[i]) > 0)
            throw err("InvalidPartners", std::string(entries[i].name) + " violates the embedding bound");
    }
    return PartnerTriple{v1, v2, vc, sigma};
}

bool good_partners(const FixSplitting& s, const PartnerTriple& p) {
    Scalar c1 = s_abs(cross(p.v1, s.w));
    Scalar c2 = s_abs(cross(p.v2, s.w));
    Scalar cc = s_abs(cross(p.vc, s.w));
    auto pairwise_ok = [&](const Vec& a, const Vec& b, const Scalar& ca, const Scalar& cb) {
        Scalar lhs = s_scale(s_abs(cross(a, b)), Rat(4));
        const Scalar& mn = (s_cmp(ca, cb) <= 0) ? ca : cb;
        return s_cmp(lhs, s_scale(mn, Rat(1, 9))) < 0;
    };
    return pairwise_ok(p.v1, p.v2, c1, c2)
        && pairwise_ok(p.v1, p.vc, c1, cc)
        && pairwise_ok(p.v2, p.vc, c2, cc);
}

Vec twist_vector(const Vec& w, const PartnerTriple& p, long k) {
    Vec sum = v_add(v_add(p.v1, p.v2), v_scale(p.vc, Rat(2)));
    return v_add(w, v_scale(sum, Rat(k)));
}

bool same_side(const FixSplitting& s, const PartnerTriple& p, long k) {
    const Vec wk = twist_vector(s.w, p, k);
    int ref = 0;
    for (const Vec* v : {&p.v1, &p.v2, &p.vc}) {
        for (const Vec* t : {&s.w, &wk}) {
            int sg = s_sign(cross(*v, *t));
            if (sg == 0) return false;
            if (ref == 0) ref = sg;
            else if (sg != ref) return false;
        }
    }
    return true;
}

std::pair<Scalar, Scalar> area_exchange_bound(const FixSplitting& s,
                                              const PartnerTriple& p, long k) {
    Rat ak(k < 0 ? -k : k);
    Scalar c12 = s_abs(cross(p.v1, p.v2));
    auto bound = [&](const Vec& va) {
        Scalar t = s_add(c12, s_scale(s_abs(cross(va, p.vc)), Rat(2)));
        return s_add(s_scale(s_abs(cross(va, s.w)), Rat(2)), s_scale(t, ak));
    };
    return {bound(p.v1), bound(p.v2)};
}

TwistPlan make_twist_plan(const FixSplitting& s, const PartnerTriple& p, long k) {
    return TwistPlan{p, k, twist_vector(s.w, p, k), area_exchange_bound(s, p, k)};
}

FixSplitting apply_twist(const FixSplitting& s, const PartnerTriple& p, long k) {
    if (k == 0) throw err("ZeroTwist", "apply_twist needs k != 0");
    if (!same_side(s, p, k)) throw err("SameSideViolated", "twisted holonomy crosses a partner line");
    Vec wk = twist_vector(s.w, p, k);
    Vec u1 = basis_completion(s.lat1, p.v1, p.orientation);
    Vec u2 = basis_completion(s.lat2, p.v2, p.orientation);
    Vec vc2 = v_scale(p.vc, Rat(2));
    FixSplitting out;
    out.lat1 = make_lattice_raw(p.v1, v_add(u1, v_scale(v_add(p.v2, vc2), Rat(k))));
    out.lat2 = make_lattice_raw(p.v2, v_add(u2, v_scale(v_add(p.v1, vc2), Rat(k))));
    out.cyl.lattice = make_lattice_raw(wk, p.vc);
    out.cyl.circumference = wk;
    out.w = wk;
    ValidationReport rep = validate(out);
    if (!rep.ok()) throw err("ResultInvalid", "twisted splitting fails validation: " + rep.violations.front());
    Areas before = areas(s), after = areas(out);
    if (!s_is_zero(s_sub(before.total, after.total)))
        throw err("ResultInvalid", "total area not conserved by the lattice update");
    return out;
}

std::vector<std::pair<long, FixSplitting>>
select_irrational_twists(const FixSplitting& s, const PartnerTriple& p) {
    if (!is_irrational(s)) throw err("RationalSplitting", "base splitting is not irrational");
    if (!good_partners(s, p)) throw err("NotGoodPartners", "triple fails the good-partner inequalities");
    std::vector<std::pair<long, FixSplitting>> out;
    bool pos = false, neg = false;
    auto consider = [&](long k) {
        FixSplitting t;
        try {
            t = apply_twist(s, p, k);
        } catch (const Error&) {
            return;
        }
        if (!is_irrational(t)) return;
        (k > 0 ? pos : neg) = true;
        out.emplace_back(k, std::move(t));
    };
    for (long k = 1; k <= 9; ++k) consider(k);
    for (long k = -1; k >= -9; --k) consider(k);
    if (!pos || !neg)
        throw GuaranteeViolated("no irrational twist with k " +
                                std::string(!pos ? "> 0" : "< 0") +
                                " among |k| <= 9 despite good partners");
    return out;
}

} // namespace fixsplit
