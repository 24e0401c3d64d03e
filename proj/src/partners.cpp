#include "fixsplit/partners.hpp"

#include <optional>

namespace fixsplit {

SearchBudget make_default_budget() {
    SearchBudget b;
    b.eps_prime = Rat(1, 100);
    b.max_convergents = 400;
    mpz_ui_pow_ui(b.max_circumference_shift.get_mpz_t(), 10, 80);
    return b;
}

SearchBudget doubled(const SearchBudget& b) {
    SearchBudget d = b;
    d.max_convergents = b.max_convergents * 2;
    d.max_circumference_shift = b.max_circumference_shift * 2;
    return d;
}

Vec choose_vc(const FixSplitting& s, const SearchBudget& budget) {
    ValidationReport rep = validate(s);
    if (!rep.ok()) throw err("InvalidSplitting", "choose_vc needs a valid splitting: " + rep.violations.front());
    Vec t = completion_transversal(s.cyl.lattice, s.w);
    /* angle_measure(t + m w, w) = area(C)/dot(t + m w, w); dot grows with m,
       so the minimizer over |m| <= shift cap is m = +cap */
    Vec vc = v_add(t, v_scale_int(s.w, budget.max_circumference_shift));
    if (s_sign(dot(vc, s.w)) <= 0)
        throw BudgetExhausted("no circumference completion with dot(vc, w) > 0 within the shift cap");
    return vc;
}

namespace {

/* Directional convergents generated on demand: the descent below mirrors
   best_approximations but only materializes records the scan actually reaches,
   which keeps deep trees cheap (late records carry huge coefficients). */
class RecordStream {
public:
    RecordStream(const Lattice& l, const Vec& w, long cap)
        : w_(w), cap_(cap), u_(l.b1), v_(l.b2), su_(cross(u_, w)), sv_(cross(v_, w)) {
        if (s_sign(su_) == s_sign(sv_)) {
            v_ = v_neg(v_);
            sv_ = s_neg(sv_);
        }
    }
    /* nullptr once the family cap is reached */
    const Vec* at(size_t i) {
        while (recs_.size() <= i) {
            if (static_cast<long>(recs_.size()) >= cap_) return nullptr;
            step();
        }
        return &recs_[i];
    }
    /* signed cross(record i, w), cached alongside the record */
    const Scalar& cross_at(size_t i) const { return crosses_[i]; }

private:
    void step() {
        Vec r;
        Scalar cr;
        if (s_cmp(s_abs(su_), s_abs(sv_)) >= 0) {
            Int a = s_floor(s_div(su_, s_neg(sv_)));
            u_ = v_add(u_, v_scale_int(v_, a));
            su_ = s_add(su_, s_scale(sv_, Rat(a)));
            r = u_;
            cr = su_;
        } else {
            Int a = s_floor(s_div(sv_, s_neg(su_)));
            v_ = v_add(v_, v_scale_int(u_, a));
            sv_ = s_add(sv_, s_scale(su_, Rat(a)));
            r = v_;
            cr = sv_;
        }
        int d = s_sign(dot(r, w_));
        if (d < 0 || (d == 0 && s_sign(cr) < 0)) {
            r = v_neg(r);
            cr = s_neg(cr);
        }
        recs_.push_back(std::move(r));
        crosses_.push_back(std::move(cr));
    }

    Vec w_;
    long cap_;
    Vec u_, v_;
    Scalar su_, sv_;
    std::vector<Vec> recs_;
    std::vector<Scalar> crosses_;
};

struct StreamState {
    const FixSplitting& s;
    Areas ar;
    Vec st;                 // oriented transversal: cross(st, w) > 0, |cross| = area(C)
    Scalar cap;             // min(eps_abs, area1, area2) as a Scalar
    Rat eps_rel;
    const Int& max_shift;
    long scanned = 0;

    /* resonance-matched vc for candidate v with cross(v, w) = c > 0;
       returns false if the shift cap or the (R)/(P) inequalities fail */
    bool resonant_vc(const Vec& v, const Scalar& c, Vec& vc_out) {
        Scalar mstar = s_neg(s_div(cross(v, st), c));
        Int M = s_round(mstar);
        if (mpz_cmpabs(M.get_mpz_t(), max_shift.get_mpz_t()) > 0) return false;
        Vec vc = v_add(st, v_scale_int(s.w, M));
        Scalar rr = s_abs(cross(v, vc));
        const Scalar& mn = (s_cmp(c, ar.ac) <= 0) ? c : ar.ac;
        if (s_cmp(rr, s_scale(mn, eps_rel)) >= 0) return false;   // (R)
        if (s_cmp(rr, cap) >= 0) return false;                    // (P) on cross(v, vc)
        vc_out = vc;
        return true;
    }
};

} // namespace

bool stream_partner_candidates(
    const FixSplitting& s, const Rat& eps_rel, const Rat& eps_abs,
    long max_convergents, const Int& max_shift,
    const std::function<bool(const PartnerTriple&, long scanned)>& visit,
    long max_scans) {
    if (!is_irrational(s))
        throw err("RationalDirection", "partner search needs an irrational splitting");
    if (max_convergents <= 0 || max_scans <= 0) return false;

    StreamState st_{s, areas(s), Vec{}, Scalar{}, eps_rel, max_shift};
    Vec t = completion_transversal(s.cyl.lattice, s.w);
    st_.st = (s_sign(cross(t, s.w)) > 0) ? t : v_neg(t);
    ScalarMode mode = mode_of(s.w.x);
    st_.cap = Scalar::from_rat(mode, eps_abs);
    if (s_cmp(st_.ar.a1, st_.cap) < 0) st_.cap = st_.ar.a1;
    if (s_cmp(st_.ar.a2, st_.cap) < 0) st_.cap = st_.ar.a2;

    const bool identical = lattices_identical(s.lat1, s.lat2);
    RecordStream recs(s.lat1, s.w, max_convergents);

    /* candidate vectors are built lazily: the signed cross cv is known
       incrementally (cross(p_m + j p_n, w) = c_m + j c_n), so most rejections
       cost one comparison and never materialize the vector */
    using VecBuilder = std::function<Vec()>;

    /* identical-lattice fast path: v1 = v2 = v, so (Q) holds with cross 0 */
    auto try_identical = [&](const Scalar& cv, const VecBuilder& build) -> int {
        if (st_.scanned >= max_scans) return 2;
        ++st_.scanned;
        int sg = s_sign(cv);
        if (sg == 0) return 0;
        Scalar c = s_abs(cv);
        if (s_cmp(c, st_.cap) >= 0) return 0;
        Vec vraw = build();
        Vec v = (sg > 0) ? vraw : v_neg(vraw);
        Vec vc;
        if (!st_.resonant_vc(v, c, vc)) return 0;
        try {
            PartnerTriple p = make_partner_triple(s, v, v, vc);
            return visit(p, st_.scanned) ? 1 : 0;
        } catch (const GuaranteeViolated&) {
            throw;
        } catch (const Error&) {
            return 0;   // non-primitive or otherwise inadmissible candidate
        }
    };

    /* general path: v2 parallel to v1 inside lat2 when available (makes
       cross(v1, v2) = 0), else exact (Q) against the lat2 convergents */
    std::vector<Vec> recs2;
    if (!identical)
        recs2 = best_approximations(s.lat2, s.w, static_cast<int>(max_convergents));
    auto try_general = [&](const Scalar& cv, const VecBuilder& build) -> int {
        if (st_.scanned >= max_scans) return 2;
        ++st_.scanned;
        int sg1 = s_sign(cv);
        if (sg1 == 0) return 0;
        Scalar c1 = s_abs(cv);
        if (s_cmp(c1, st_.cap) >= 0) return 0;
        Vec v1raw = build();
        Vec v1 = (sg1 > 0) ? v1raw : v_neg(v1raw);
        if (!is_primitive(s.lat1, v1)) return 0;
        std::vector<Vec> v2cands;
        if (direction_is_rational(s.lat2, v1)) {
            Vec v2 = parallel_primitive(s.lat2, v1);
            if (s_sign(dot(v2, v1)) < 0) v2 = v_neg(v2);
            v2cands.push_back(v2);
        }
        for (const Vec& r2 : recs2) v2cands.push_back(r2);
        for (const Vec& v2raw : v2cands) {
            Scalar cv2 = cross(v2raw, s.w);
            int sg2 = s_sign(cv2);
            if (sg2 == 0) continue;
            Scalar c2 = s_abs(cv2);
            if (s_cmp(c2, st_.cap) >= 0) continue;
            Vec v2 = (sg2 > 0) ? v2raw : v_neg(v2raw);
            Scalar q12 = s_abs(cross(v1, v2));
            const Scalar& mn12 = (s_cmp(c1, c2) <= 0) ? c1 : c2;
            if (s_cmp(q12, s_scale(mn12, eps_rel)) >= 0) continue;   // (Q)
            if (s_cmp(q12, st_.cap) >= 0) continue;                  // (P) on cross(v1, v2)
            Vec vc;
            if (!st_.resonant_vc(v1, c1, vc)) continue;
            /* re-check (R)/(P) for v2 against the shared vc */
            Scalar r2c = s_abs(cross(v2, vc));
            const Scalar& mn2 = (s_cmp(c2, st_.ar.ac) <= 0) ? c2 : st_.ar.ac;
            if (s_cmp(r2c, s_scale(mn2, eps_rel)) >= 0) continue;
            if (s_cmp(r2c, st_.cap) >= 0) continue;
            if (!is_primitive(s.lat2, v2)) continue;
            try {
                PartnerTriple p = make_partner_triple(s, v1, v2, vc);
                if (visit(p, st_.scanned)) return 1;
            } catch (const GuaranteeViolated&) {
                throw;
            } catch (const Error&) {
                continue;
            }
        }
        return 0;
    };

    auto try_v = [&](const Scalar& cv, const VecBuilder& build) -> int {
        return identical ? try_identical(cv, build) : try_general(cv, build);
    };

    /* anchor: first convergent below the absolute cap */
    size_t m = 0;
    for (size_t i = 0;; ++i) {
        if (!recs.at(i)) return false;
        if (s_cmp(s_abs(recs.cross_at(i)), st_.cap) < 0) {
            m = i;
            break;
        }
    }
    const Vec pm = *recs.at(m);          // copies: the record cache may reallocate
    const Scalar cm = recs.cross_at(m);  // signed

    if (int r = try_v(cm, [&] { return pm; })) return r == 1;
    const Scalar cm_abs = s_abs(cm);
    for (size_t n = m + 1;; ++n) {
        if (!recs.at(n)) return false;
        const Vec pn = *recs.at(n);
        const Scalar cn = recs.cross_at(n);
        if (int r = try_v(cn, [&] { return pn; })) return r == 1;
        Int jmax = s_floor(s_div(s_add(st_.cap, cm_abs), s_abs(cn)));
        for (Int jj = 1; jj <= jmax; ++jj) {
            for (int sg : {+1, -1}) {
                Int j = (sg > 0) ? jj : Int(-jj);
                Scalar cc = s_add(cm, s_scale(cn, Rat(j)));
                int r = try_v(cc, [&] { return v_add(pm, v_scale_int(pn, j)); });
                if (r) return r == 1;
            }
        }
    }
}

PartnerTriple search(const FixSplitting& s, const SearchBudget& budget) {
    if (!(budget.eps_prime > 0))
        throw err("UsageError", "eps_prime must be positive");
    std::optional<PartnerTriple> found;
    const bool want_good = budget.eps_prime <= Rat(1, 36);
    stream_partner_candidates(
        s, budget.eps_prime, budget.eps_prime,
        budget.max_convergents, budget.max_circumference_shift,
        [&](const PartnerTriple& p, long) {
            if (want_good && !good_partners(s, p)) return false;
            found = p;
            return true;
        },
        budget.max_scans);
    if (!found)
        throw BudgetExhausted("no partner triple within eps' = " + rat_to_string(budget.eps_prime)
                              + ", depth " + std::to_string(budget.max_convergents)
                              + "; retry with a doubled budget");
    return *found;
}

} // namespace fixsplit
