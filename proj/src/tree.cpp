#include "fixsplit/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fixsplit {

namespace {

Rat rat_min(const Rat& a, const Rat& b) { return a <= b ? a : b; }

} // namespace

std::string slope_key(const Vec& w) {
    if (s_sign(w.x) == 0) return "inf";
    return s_repr(s_div(w.y, w.x));
}

std::vector<long> SplittingTree::leaves() const {
    std::vector<long> out;
    for (long i = 0; i < static_cast<long>(nodes.size()); ++i)
        if (is_leaf(i)) out.push_back(i);
    return out;
}

std::array<long, 2> expand(SplittingTree& t, long node, const SearchBudget& budget) {
    if (node < 0 || node >= static_cast<long>(t.nodes.size()))
        throw err("UsageError", "expand: node index out of range");
    if (t.nodes[node].expanded) return t.nodes[node].children;

    const Rat eps_n = t.nodes[node].eps;
    const Rat eps_rel = rat_min(budget.eps_prime, Rat(1, 36));
    Rat eps_abs = rat_min(budget.eps_prime, eps_n / 12);
    const Rat quarter = eps_n / 4;

    struct Found {
        bool have = false;
        long k = 0;
        FixSplitting s;
        PartnerTriple p;
        std::pair<Scalar, Scalar> bounds;
        std::string key;
    };

    for (int attempt = 0; attempt < 80; ++attempt) {
        const FixSplitting& sn = t.nodes[node].s;
        const Scalar quarter_s = Scalar::from_rat(mode_of(sn.w.x), quarter);
        Found pos, neg;
        bool budget_fail = false;
        bool committed = false;
        long triples = 0;
        stream_partner_candidates(
            sn, eps_rel, eps_abs, budget.max_convergents, budget.max_circumference_shift,
            [&](const PartnerTriple& p, long) {
                ++triples;
                /* gates per k reduce to signs and comparisons of c0 + k cA for
                   precomputed crosses, so the expensive surface construction
                   only runs for k that already passed every budget */
                const Vec A = v_add(v_add(p.v1, p.v2), v_scale(p.vc, Rat(2)));
                const Scalar c01 = cross(p.v1, sn.w), c02 = cross(p.v2, sn.w),
                             c0c = cross(p.vc, sn.w);
                const int sref = s_sign(c01);
                if (sref == 0 || s_sign(c02) != sref || s_sign(c0c) != sref) return false;
                const Scalar cA1 = cross(p.v1, A), cA2 = cross(p.v2, A), cAc = cross(p.vc, A);
                const Scalar cwA = cross(sn.w, A), dwA = dot(sn.w, A), ww = len2(sn.w);
                const Scalar c12 = s_abs(cross(p.v1, p.v2));
                const Scalar b1base = s_scale(s_abs(c01), Rat(2));
                const Scalar b1step = s_add(c12, s_scale(s_abs(cross(p.v1, p.vc)), Rat(2)));
                const Scalar b2base = s_scale(s_abs(c02), Rat(2));
                const Scalar b2step = s_add(c12, s_scale(s_abs(cross(p.v2, p.vc)), Rat(2)));
                for (int sg : {+1, -1}) {
                    Found& slot = (sg > 0) ? pos : neg;
                    if (slot.have) continue;
                    for (long mag = 1; mag <= 9; ++mag) {
                        const long k = sg * mag;
                        const Rat kr(k), akr(mag);
                        if (s_sign(s_add(c01, s_scale(cA1, kr))) != sref
                            || s_sign(s_add(c02, s_scale(cA2, kr))) != sref
                            || s_sign(s_add(c0c, s_scale(cAc, kr))) != sref)
                            continue;   // same-side fails for this k
                        const Scalar dk = s_add(ww, s_scale(dwA, kr));
                        const int fwd = s_sign(dk);
                        if (fwd == 0) { budget_fail = true; continue; }
                        if (s_cmp(s_abs(s_scale(cwA, kr)), s_mul(quarter_s, s_abs(dk))) >= 0
                            || s_cmp(s_add(b1base, s_scale(b1step, akr)), quarter_s) >= 0
                            || s_cmp(s_add(b2base, s_scale(b2step, akr)), quarter_s) >= 0) {
                            budget_fail = true;
                            continue;
                        }
                        Vec wk = v_add(sn.w, v_scale(A, kr));
                        if (fwd < 0) wk = v_neg(wk);
                        std::string key = slope_key(wk);
                        if (t.registry.count(key)) continue;
                        FixSplitting s2;
                        try {
                            s2 = apply_twist(sn, p, k);
                        } catch (const GuaranteeViolated&) {
                            throw;
                        } catch (const Error&) {
                            continue;
                        }
                        if (!is_irrational(s2)) continue;
                        if (s_sign(dot(sn.w, s2.w)) < 0) {
                            s2.w = v_neg(s2.w);
                            s2.cyl.circumference = s2.w;
                        }
                        if (!v_equal(s2.w, wk)) continue;   // defensive
                        auto b = area_exchange_bound(sn, p, k);
                        slot = Found{true, k, std::move(s2), p, std::move(b), std::move(key)};
                        break;
                    }
                }
                if (pos.have && neg.have) {
                    if (pos.key == neg.key) { neg = Found{}; return false; }
                    committed = true;
                    return true;
                }
                if (budget_fail && triples > 8) return true;   // abandon this pass, tighten eps_abs
                return false;
            },
            budget.max_scans);
        if (committed) {
            std::array<long, 2> ch{};
            for (int side = 0; side < 2; ++side) {
                Found& f = (side == 0) ? pos : neg;
                TreeNode child;
                child.s = std::move(f.s);
                child.eps = eps_n / 2;
                child.depth = t.nodes[node].depth + 1;
                child.parent = node;
                child.k = f.k;
                child.partners = f.p;
                child.bounds = std::move(f.bounds);
                t.nodes.push_back(std::move(child));
                ch[side] = static_cast<long>(t.nodes.size()) - 1;
                t.registry.emplace(f.key, ch[side]);
            }
            t.nodes[node].children = ch;
            t.nodes[node].expanded = true;
            return ch;
        }
        eps_abs /= 2;
    }
    throw BudgetExhausted("no admissible twist pair at depth "
                          + std::to_string(t.nodes[node].depth)
                          + " within the budget; retry with a doubled budget");
}

SplittingTree build_tree(const FixSplitting& root, const Rat& eps0, int depth,
                         const SearchBudget& budget) {
    if (!(eps0 > 0)) throw err("UsageError", "eps0 must be positive");
    ValidationReport rep = validate(root);
    if (!rep.ok()) throw err("InvalidSplitting", rep.violations.front());
    if (!is_irrational(root))
        throw err("RationalSplitting", "tree root must have an irrational splitting");

    SplittingTree t;
    TreeNode r;
    r.s = root;
    r.eps = eps0;
    t.nodes.push_back(std::move(r));
    t.registry.emplace(slope_key(root.w), 0);

    std::vector<long> frontier{0};
    for (int d = 0; d < depth; ++d) {
        std::vector<long> next;
        for (long idx : frontier) {
            try {
                auto ch = expand(t, idx, budget);
                next.push_back(ch[0]);
                next.push_back(ch[1]);
            } catch (const BudgetExhausted&) {
                t.complete = false;
                t.incomplete.push_back(idx);
            }
        }
        frontier = std::move(next);
    }
    return t;
}

PathReport audit_path(const SplittingTree& t, long leaf) {
    if (leaf < 0 || leaf >= static_cast<long>(t.nodes.size()))
        throw err("UsageError", "audit_path: node index out of range");
    std::vector<long> path;
    for (long i = leaf; i >= 0; i = t.nodes[i].parent) path.push_back(i);
    std::reverse(path.begin(), path.end());
    const size_t N = path.size();

    PathReport rep;
    rep.budgets_ok = rep.areas_ok = rep.crossings_ok = rep.recurrence_ok = true;

    const Vec& wN = t.nodes[leaf].s.w;
    const ScalarMode mode = mode_of(wN.x);
    const double lenN = std::sqrt(s_to_double(len2(wN)));

    std::vector<Areas> ars;
    ars.reserve(N);
    for (long i : path) ars.push_back(areas(t.nodes[i].s));
    const Scalar nine_total = s_scale(ars[0].total, Rat(9));

    Scalar partial = Scalar::from_rat(mode, Rat(0));
    Rat eps_budget(0);
    std::vector<double> hs(N, 0.0);
    for (size_t n = 0; n < N; ++n) {
        const TreeNode& nd = t.nodes[path[n]];
        hs[n] = s_to_double(s_abs(cross(nd.s.w, wN))) / lenN;
        PathRow row;
        row.n = static_cast<int>(n);
        row.k = nd.k;
        row.hn = hs[n];
        row.area1 = s_to_double(ars[n].a1);
        row.area2 = s_to_double(ars[n].a2);
        row.abs_w = std::sqrt(s_to_double(len2(nd.s.w)));
        if (n > 0) {
            const TreeNode& pd = t.nodes[path[n - 1]];
            Scalar d1 = s_abs(s_sub(ars[n].a1, ars[n - 1].a1));
            Scalar d2 = s_abs(s_sub(ars[n].a2, ars[n - 1].a2));
            const Scalar& an = (s_cmp(d1, d2) >= 0) ? d1 : d2;
            partial = s_add(partial, an);
            eps_budget += pd.eps / 4;
            if (s_cmp(partial, Scalar::from_rat(mode, eps_budget)) > 0) rep.budgets_ok = false;
            Scalar cx = s_abs(cross(pd.s.w, nd.s.w));
            if (s_cmp(cx, nine_total) > 0) rep.crossings_ok = false;
            double rhs = 2.0 * s_to_double(cx) / row.abs_w;
            if (hs[n] > rhs + 1e-12 * (rhs + 1.0)) rep.recurrence_ok = false;
            row.an = s_to_double(an);
        }
        row.partial_sum = s_to_double(partial);
        if (s_sign(ars[n].a1) <= 0 || s_sign(ars[n].a2) <= 0) rep.areas_ok = false;
        rep.rows.push_back(row);
    }
    Rat half_eps0 = t.nodes[path[0]].eps / 2;
    if (s_cmp(partial, Scalar::from_rat(mode, half_eps0)) >= 0) rep.budgets_ok = false;
    rep.heights_ok = (N < 2) || hs[N - 2] < 1e-6;

    rep.theta_x = s_to_double(wN.x) / lenN;
    rep.theta_y = s_to_double(wN.y) / lenN;
    Rat half_epsN = t.nodes[leaf].eps / 2;
    rep.angular_uncertainty = half_epsN.get_d();
    return rep;
}

TreeAudit audit(const SplittingTree& t) {
    TreeAudit a;
    auto fail = [&](long i, const std::string& m) {
        a.ok = false;
        a.violations.push_back("node " + std::to_string(i) + ": " + m);
    };
    if (t.registry.size() != t.nodes.size())
        fail(-1, "registry size does not match node count");
    for (long i = 0; i < static_cast<long>(t.nodes.size()); ++i) {
        const TreeNode& nd = t.nodes[i];
        auto it = t.registry.find(slope_key(nd.s.w));
        if (it == t.registry.end() || it->second != i) fail(i, "slope key not registered to this node");
        ValidationReport r = validate(nd.s);
        if (!r.ok()) fail(i, "invalid splitting: " + r.violations.front());
        if (!is_irrational(nd.s)) fail(i, "rational splitting");
        if (nd.children[0] < 0) continue;
        const ScalarMode mode = mode_of(nd.s.w.x);
        const Scalar quarter_s = Scalar::from_rat(mode, nd.eps / 4);
        const Scalar total = areas(nd.s).total;
        const Scalar nine_total = s_scale(total, Rat(9));
        if (t.nodes[nd.children[0]].k <= 0 || t.nodes[nd.children[1]].k >= 0)
            fail(i, "children do not carry one twist of each sign");
        for (long c : nd.children) {
            ++a.edges_checked;
            const TreeNode& ch = t.nodes[c];
            if (ch.parent != i) fail(c, "parent link broken");
            if (ch.eps * 2 != nd.eps) fail(c, "eps does not halve");
            if (ch.k == 0 || ch.k > 9 || ch.k < -9) fail(c, "twist exponent out of range");
            Vec wk = twist_vector(nd.s.w, ch.partners, ch.k);
            if (!(v_equal(wk, ch.s.w) || v_equal(v_neg(wk), ch.s.w)))
                fail(c, "child direction is not the stated twist of the parent direction");
            if (s_sign(dot(nd.s.w, ch.s.w)) <= 0) fail(c, "child direction not forward");
            if (!same_side(nd.s, ch.partners, ch.k)) fail(c, "same-side condition fails");
            if (!good_partners(nd.s, ch.partners)) fail(c, "partner triple not good");
            if (s_cmp(angle_measure(nd.s.w, ch.s.w), quarter_s) >= 0) fail(c, "angle budget exceeded");
            auto b = area_exchange_bound(nd.s, ch.partners, ch.k);
            if (!s_equal(b.first, ch.bounds.first) || !s_equal(b.second, ch.bounds.second))
                fail(c, "stored bounds do not match recomputation");
            if (s_cmp(b.first, quarter_s) >= 0 || s_cmp(b.second, quarter_s) >= 0)
                fail(c, "area-exchange bound exceeds eps/4");
            Areas ap = areas(nd.s), ac = areas(ch.s);
            if (!s_equal(ap.total, ac.total)) fail(c, "total area not conserved");
            if (s_cmp(s_abs(s_sub(ac.a1, ap.a1)), b.first) > 0
                || s_cmp(s_abs(s_sub(ac.a2, ap.a2)), b.second) > 0)
                fail(c, "actual exchange exceeds stated bound");
            if (s_cmp(s_abs(cross(nd.s.w, ch.s.w)), nine_total) > 0)
                fail(c, "direction crossing exceeds 9 area(M)");
        }
    }
    return a;
}

DirectionSeparation distinct_directions(const SplittingTree& t) {
    std::vector<long> lv = t.leaves();
    DirectionSeparation ds;
    ds.leaf_count = static_cast<long>(lv.size());
    if (lv.size() < 2) {
        ds.all_distinct = true;
        return ds;
    }
    std::sort(lv.begin(), lv.end(), [&](long a, long b) {
        return s_sign(cross(t.nodes[a].s.w, t.nodes[b].s.w)) > 0;
    });
    ds.all_distinct = true;
    double mn = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < lv.size(); ++i) {
        const Vec& wa = t.nodes[lv[i]].s.w;
        const Vec& wb = t.nodes[lv[i + 1]].s.w;
        Scalar cx = s_abs(cross(wa, wb));
        if (s_sign(cx) == 0) {
            ds.all_distinct = false;
            continue;
        }
        double ang = s_to_double(cx)
                     / (std::sqrt(s_to_double(len2(wa))) * std::sqrt(s_to_double(len2(wb))));
        mn = std::min(mn, ang);
    }
    ds.min_angle = std::isfinite(mn) ? mn : 0.0;
    return ds;
}

} // namespace fixsplit
