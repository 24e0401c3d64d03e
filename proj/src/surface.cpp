#include "fixsplit/surface.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace fixsplit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

Vec vscale(const Vec& v, const Scalar& s) { return {s_mul(s, v.x), s_mul(s, v.y)}; }

double fd(const Scalar& s) { return s_to_double(s); }

/* identity key of an exact chart point; float mode quantizes to a 1e-9 grid */
std::string pkey(const ScalarMode& mode, const Vec& v) {
    if (mode.is_exact()) return s_repr(v.x) + "|" + s_repr(v.y);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%lld|%lld",
                  (long long)std::llround(fd(v.x) * 1e9),
                  (long long)std::llround(fd(v.y) * 1e9));
    return buf;
}

bool audit_eq(const ScalarMode& mode, const Vec& a, const Vec& b) {
    if (mode.is_exact()) return v_equal(a, b);
    return std::fabs(fd(a.x) - fd(b.x)) <= 1e-12 && std::fabs(fd(a.y) - fd(b.y)) <= 1e-12;
}

/* ---- build_model: slit torus charts --------------------------------- */

struct TorusBuild {
    std::vector<Scalar> ts;      // slit parameters 0 = t_0 < ... < t_J = 1
    std::vector<Vec> L;          // per-chord wrap translation (lattice vector)
    std::vector<int> rbank, lbank;
};

/* Parallelogram chart over the reduced basis with the slit 0 -> w decomposed
   into chords wrapped into the fundamental domain; boundary edges split at
   every point the slit (or a singular point's identified image) touches. */
TorusBuild build_torus_chart(PolygonModel& m, int chart, const Lattice& latr,
                             const Vec& w, const Vec& tc, int cr_chart, int cl_chart,
                             const std::string& nm, const ScalarMode& mode) {
    const Vec a = latr.b1, b = latr.b2;
    const auto co = coordinates_in(latr, w);
    const Scalar &al = co.first, &be = co.second;
    if (s_sign(al) == 0 || s_sign(be) == 0)
        throw err("SlitWrapsThroughVertex", nm + ": slit parallel to a reduced basis vector");
    const Scalar zero = Scalar::from_rat(mode, Rat(0));
    const Scalar one = Scalar::from_rat(mode, Rat(1));

    /* breakpoints: t in (0,1) where a slit coordinate crosses an integer */
    struct Bp { Scalar t; int side; };          // 0: x-coordinate, 1: y-coordinate
    std::vector<Bp> bps;
    auto add_side = [&](const Scalar& c, int side) {
        const Scalar ca = s_abs(c);
        Int k = s_floor(ca);
        if (s_is_integer(ca)) k -= 1;
        if (k > 20000) throw err("ModelTooLarge", nm + ": slit wraps " + k.get_str() + " times");
        for (Int p = 1; p <= k; ++p)
            bps.push_back({s_div(Scalar::from_rat(mode, Rat(p)), ca), side});
    };
    add_side(al, 0);
    add_side(be, 1);
    std::sort(bps.begin(), bps.end(),
              [](const Bp& x, const Bp& y) { return s_cmp(x.t, y.t) < 0; });
    for (size_t i = 1; i < bps.size(); ++i)
        if (s_cmp(bps[i - 1].t, bps[i].t) == 0)
            throw err("SlitWrapsThroughVertex", nm + ": slit passes through a lattice point");

    TorusBuild tb;
    tb.ts.push_back(zero);
    for (const Bp& bp : bps) tb.ts.push_back(bp.t);
    tb.ts.push_back(one);
    const size_t J = tb.ts.size() - 1;

    std::vector<Int> mm(J), nn(J);
    for (size_t j = 0; j < J; ++j) {
        const Scalar tm = s_scale(s_add(tb.ts[j], tb.ts[j + 1]), Rat(1, 2));
        mm[j] = -s_floor(s_mul(al, tm));
        nn[j] = -s_floor(s_mul(be, tm));
        tb.L.push_back(v_add(v_scale_int(a, mm[j]), v_scale_int(b, nn[j])));
    }

    /* boundary split coordinates: interior chord crossings + the slit tip */
    std::vector<Scalar> xsplit, ysplit;
    for (size_t i = 0; i < bps.size(); ++i) {
        const Scalar& t = tb.ts[i + 1];
        if (bps[i].side == 1)
            xsplit.push_back(s_add(s_mul(al, t), Scalar::from_rat(mode, Rat(mm[i]))));
        else
            ysplit.push_back(s_add(s_mul(be, t), Scalar::from_rat(mode, Rat(nn[i]))));
    }
    const Scalar xt = s_add(al, Scalar::from_rat(mode, Rat(mm[J - 1])));
    const Scalar yt = s_add(be, Scalar::from_rat(mode, Rat(nn[J - 1])));
    const bool xb = s_sign(xt) == 0 || s_cmp(xt, one) == 0;
    const bool yb = s_sign(yt) == 0 || s_cmp(yt, one) == 0;
    if (xb && yb)
        throw err("SlitWrapsThroughVertex", nm + ": slit tip at a lattice point");
    if (yb) xsplit.push_back(xt);
    if (xb) ysplit.push_back(yt);

    auto finish = [&](std::vector<Scalar>& sp) {
        std::sort(sp.begin(), sp.end(),
                  [](const Scalar& x, const Scalar& y) { return s_cmp(x, y) < 0; });
        for (size_t i = 1; i < sp.size(); ++i)
            if (s_cmp(sp[i - 1], sp[i]) == 0)
                throw GuaranteeViolated(nm + ": coincident boundary split points");
        sp.insert(sp.begin(), zero);
        sp.push_back(one);
    };
    finish(xsplit);
    finish(ysplit);

    auto push = [&](Vec p, Vec q, int target, Vec tau, const std::string& name) {
        m.edges.push_back({chart, std::move(p), std::move(q), target, std::move(tau), -1, name});
        return (int)m.edges.size() - 1;
    };
    for (size_t i = 0; i + 1 < xsplit.size(); ++i) {
        const int ib = push(vscale(a, xsplit[i]), vscale(a, xsplit[i + 1]),
                            chart, b, nm + ".bot" + std::to_string(i));
        const int it = push(v_add(vscale(a, xsplit[i + 1]), b), v_add(vscale(a, xsplit[i]), b),
                            chart, v_neg(b), nm + ".top" + std::to_string(i));
        m.edges[ib].twin = it;
        m.edges[it].twin = ib;
    }
    for (size_t i = 0; i + 1 < ysplit.size(); ++i) {
        const int ir = push(v_add(a, vscale(b, ysplit[i])), v_add(a, vscale(b, ysplit[i + 1])),
                            chart, v_neg(a), nm + ".right" + std::to_string(i));
        const int il = push(vscale(b, ysplit[i + 1]), vscale(b, ysplit[i]),
                            chart, a, nm + ".left" + std::to_string(i));
        m.edges[ir].twin = il;
        m.edges[il].twin = ir;
    }
    for (size_t j = 0; j < J; ++j) {
        const Vec S = v_add(vscale(w, tb.ts[j]), tb.L[j]);
        const Vec E = v_add(vscale(w, tb.ts[j + 1]), tb.L[j]);
        tb.rbank.push_back(push(E, S, cr_chart, v_neg(tb.L[j]),
                                nm + ".rbank" + std::to_string(j)));
        tb.lbank.push_back(push(S, E, cl_chart, v_sub(tc, tb.L[j]),
                                nm + ".lbank" + std::to_string(j)));
    }
    return tb;
}

/* (w, transversal) parallelogram; boundary circles subdivided to match the
   chords of the torus they glue to */
void build_cyl_chart(PolygonModel& m, int chart, const TorusBuild& tb, int tb_chart,
                     const TorusBuild& tt, int tt_chart, const Vec& w, const Vec& tc,
                     const std::string& nm, const ScalarMode& mode) {
    const Vec zero = vec_from_rats(mode, Rat(0), Rat(0));
    auto push = [&](Vec p, Vec q, int target, Vec tau, int twin, const std::string& name) {
        m.edges.push_back({chart, std::move(p), std::move(q), target, std::move(tau), twin, name});
        return (int)m.edges.size() - 1;
    };
    for (size_t j = 0; j + 1 < tb.ts.size(); ++j) {
        const int idx = push(vscale(w, tb.ts[j]), vscale(w, tb.ts[j + 1]), tb_chart,
                             tb.L[j], tb.rbank[j], nm + ".bottom" + std::to_string(j));
        m.edges[tb.rbank[j]].twin = idx;
    }
    for (size_t j = 0; j + 1 < tt.ts.size(); ++j) {
        const int idx = push(v_add(tc, vscale(w, tt.ts[j + 1])), v_add(tc, vscale(w, tt.ts[j])),
                             tt_chart, v_sub(tt.L[j], tc), tt.lbank[j],
                             nm + ".top" + std::to_string(j));
        m.edges[tt.lbank[j]].twin = idx;
    }
    const int il = push(tc, zero, chart, w, -1, nm + ".sideL");
    const int ir = push(w, v_add(w, tc), chart, v_neg(w), il, nm + ".sideR");
    m.edges[il].twin = ir;
}

} // namespace

void finalize_model(PolygonModel& m) {
    const int n = (int)m.edges.size();
    const int nc = (int)m.charts.size();

    /* exact pairing audit: twin is an involution and segments are congruent */
    for (int i = 0; i < n; ++i) {
        const ModelEdge& e = m.edges[i];
        if (e.chart < 0 || e.chart >= nc || e.target < 0 || e.target >= nc ||
            e.twin < 0 || e.twin >= n || e.twin == i)
            throw GuaranteeViolated("model pairing: bad indices at " + e.name);
        const ModelEdge& f = m.edges[e.twin];
        if (f.twin != i || f.chart != e.target || e.chart != f.target ||
            !audit_eq(m.mode, f.p, v_add(e.q, e.tau)) ||
            !audit_eq(m.mode, f.q, v_add(e.p, e.tau)) ||
            !audit_eq(m.mode, f.tau, v_neg(e.tau)) ||
            audit_eq(m.mode, e.p, e.q))
            throw GuaranteeViolated("model pairing: mismatch at " + e.name + " / " + f.name);
    }

    m.fedges.clear();
    m.fcharts.clear();
    m.chart_edges.assign(nc, {});
    for (int i = 0; i < n; ++i) {
        const ModelEdge& e = m.edges[i];
        const double px = fd(e.p.x), py = fd(e.p.y);
        m.fedges.push_back({e.chart, e.target, e.twin, px, py,
                            fd(e.q.x) - px, fd(e.q.y) - py, fd(e.tau.x), fd(e.tau.y)});
        m.chart_edges[e.chart].push_back(i);
    }
    for (const ModelChart& c : m.charts)
        m.fcharts.push_back({fd(c.origin.x), fd(c.origin.y), fd(c.span1.x), fd(c.span1.y),
                             fd(c.span2.x), fd(c.span2.y), std::fabs(fd(c.area))});

    /* wedge successor: from the end of e, the edge leaving the same chart
       point whose outgoing direction is the nearest clockwise rotation of the
       incoming direction (zero rotation means a full 2 pi turn) */
    std::map<std::string, std::vector<int>> starts;
    for (int i = 0; i < n; ++i)
        starts[std::to_string(m.edges[i].chart) + "#" + pkey(m.mode, m.edges[i].p)].push_back(i);
    std::vector<int> nxt(n, -1);
    std::vector<double> wid(n, 0);
    for (int i = 0; i < n; ++i) {
        const ModelEdge& e = m.edges[i];
        const auto it = starts.find(std::to_string(e.chart) + "#" + pkey(m.mode, e.q));
        if (it == starts.end())
            throw GuaranteeViolated("open vertex at end of " + e.name);
        const double a_in = std::atan2(-m.fedges[i].dy, -m.fedges[i].dx);
        for (int j : it->second) {
            double d = std::fmod(a_in - std::atan2(m.fedges[j].dy, m.fedges[j].dx), kTwoPi);
            if (d < 0) d += kTwoPi;
            if (d < 1e-12) d = kTwoPi;
            if (nxt[i] < 0 || d < wid[i]) { nxt[i] = j; wid[i] = d; }
        }
    }

    /* walk wedge cycles around identified vertices */
    m.wedges.assign(n, {});
    m.classes.clear();
    std::vector<char> vis(n, 0);
    for (int e0 = 0; e0 < n; ++e0) {
        if (vis[e0]) continue;
        const int cls = (int)m.classes.size();
        double angle = 0;
        int cnt = 0;
        int cur = e0;
        while (true) {
            if (vis[cur])
                throw GuaranteeViolated("wedge walk collision at " + m.edges[cur].name);
            vis[cur] = 1;
            const int nj = nxt[cur];
            const auto& fe = m.fedges[cur];
            m.wedges[cur] = {cls, m.edges[cur].chart, fe.px + fe.dx, fe.py + fe.dy,
                             std::atan2(m.fedges[nj].dy, m.fedges[nj].dx),
                             std::atan2(-fe.dy, -fe.dx), wid[cur]};
            angle += wid[cur];
            ++cnt;
            cur = m.edges[nj].twin;
            if (cur == e0) break;
        }
        m.classes.push_back({angle, cnt, std::fabs(angle - kTwoPi) > 1e-9});
    }

    m.singular_points.clear();
    std::map<std::string, std::pair<int, int>> seen;   // point key -> (class, wedge)
    for (int i = 0; i < n; ++i) {
        const ModelWedge& w = m.wedges[i];
        if (!m.classes[w.cls].singular) continue;
        const std::string key =
            std::to_string(w.chart) + "#" + pkey(m.mode, m.edges[i].q);
        const auto it = seen.find(key);
        if (it == seen.end()) seen[key] = {w.cls, i};
        else if (it->second.first != w.cls)
            throw GuaranteeViolated("chart point shared by two singular classes");
    }
    for (const auto& [key, v] : seen) {
        const ModelWedge& w = m.wedges[v.second];
        m.singular_points.push_back({w.chart, w.qx, w.qy, v.first});
    }
}

PolygonModel build_model(const FixSplitting& s) {
    const ValidationReport rep = validate(s);
    if (!rep.ok())
        throw err("InvalidSplitting", "build_model: " + rep.violations.front());
    const ScalarMode mode = mode_of(s.w.x);
    const Areas ar = areas(s);
    const Lattice l1 = reduce(s.lat1), l2 = reduce(s.lat2);
    const Vec tc = completion_transversal(s.cyl.lattice, s.w);
    const Vec zero = vec_from_rats(mode, Rat(0), Rat(0));

    PolygonModel m;
    m.mode = mode;
    m.charts.push_back({"T1", zero, l1.b1, l1.b2, covolume(l1)});
    m.charts.push_back({"T2", zero, l2.b1, l2.b2, covolume(l2)});
    m.charts.push_back({"C1", zero, s.w, tc, cross(s.w, tc)});
    m.charts.push_back({"C2", zero, s.w, tc, cross(s.w, tc)});

    const TorusBuild t1 = build_torus_chart(m, 0, l1, s.w, tc, 2, 3, "T1", mode);
    const TorusBuild t2 = build_torus_chart(m, 1, l2, s.w, tc, 3, 2, "T2", mode);
    build_cyl_chart(m, 2, t1, 0, t2, 1, s.w, tc, "C1", mode);
    build_cyl_chart(m, 3, t2, 1, t1, 0, s.w, tc, "C2", mode);

    m.total_area = s_add(s_add(m.charts[0].area, m.charts[1].area),
                         s_add(m.charts[2].area, m.charts[3].area));
    if (s_cmp(m.total_area, ar.total) != 0)
        throw GuaranteeViolated("model area differs from splitting area");

    finalize_model(m);

    int nsing = 0;
    for (const VertexClass& c : m.classes) {
        if (!c.singular) continue;
        ++nsing;
        if (std::fabs(c.angle - 6 * kPi) > 1e-9)
            throw GuaranteeViolated("cone angle " + std::to_string(c.angle) + " is not 6 pi");
    }
    if (nsing != 2)
        throw GuaranteeViolated("expected 2 singular points, found " + std::to_string(nsing));
    return m;
}

PolygonModel make_square_torus_fixture() {
    const ScalarMode mode = ScalarMode::flt();
    auto v = [](double x, double y) { return Vec{Scalar::from_double(x), Scalar::from_double(y)}; };
    PolygonModel m;
    m.mode = mode;
    m.charts.push_back({"left", v(0, 0), v(0.5, 0), v(0, 1), Scalar::from_double(0.5)});
    m.charts.push_back({"right", v(0.5, 0), v(0.5, 0), v(0, 1), Scalar::from_double(0.5)});
    m.total_area = Scalar::from_double(1.0);
    auto push = [&](int chart, Vec p, Vec q, int target, Vec tau, int twin, const char* name) {
        m.edges.push_back({chart, std::move(p), std::move(q), target, std::move(tau), twin, name});
        return (int)m.edges.size() - 1;
    };
    const int lb = push(0, v(0, 0), v(0.5, 0), 0, v(0, 1), -1, "L.bot");
    const int lt = push(0, v(0.5, 1), v(0, 1), 0, v(0, -1), lb, "L.top");
    m.edges[lb].twin = lt;
    const int rb = push(1, v(0.5, 0), v(1, 0), 1, v(0, 1), -1, "R.bot");
    const int rt = push(1, v(1, 1), v(0.5, 1), 1, v(0, -1), rb, "R.top");
    m.edges[rb].twin = rt;
    const int lr = push(0, v(0.5, 0), v(0.5, 1), 1, v(0, 0), -1, "L.right");
    const int rl = push(1, v(0.5, 1), v(0.5, 0), 0, v(0, 0), lr, "R.left");
    m.edges[lr].twin = rl;
    const int rr = push(1, v(1, 0), v(1, 1), 0, v(-1, 0), -1, "R.right");
    const int ll = push(0, v(0, 1), v(0, 0), 1, v(1, 0), rr, "L.left");
    m.edges[rr].twin = ll;
    finalize_model(m);
    for (const VertexClass& c : m.classes)
        if (c.singular) throw GuaranteeViolated("square fixture grew a singular point");
    return m;
}

TraceResult trace(const PolygonModel& m, int chart, double x, double y,
                  double dir_x, double dir_y, double horizon, const TraceOptions& opt) {
    if (chart < 0 || chart >= (int)m.charts.size())
        throw err("BadChart", "trace: chart index out of range");
    const double dn = std::hypot(dir_x, dir_y);
    if (!(dn > 0)) throw err("ZeroDirection", "trace: direction must be nonzero");
    const double dx = dir_x / dn, dy = dir_y / dn;
    const double snap = opt.snap;
    for (const SingularPoint& sp : m.singular_points)
        if (sp.chart == chart && std::hypot(x - sp.x, y - sp.y) < snap)
            throw err("StartAtSingularity", "trace: start within snap of a singular point");

    TraceResult res;
    std::vector<double> occ(m.charts.size(), 0.0);
    const int ch0 = chart;
    const double p0x = x, p0y = y;
    int ch = chart;
    double px = x, py = y, t = 0;
    if (opt.record_path) res.path.push_back({0, ch, px, py});

    enum class Ev { None, Sing, Closed, Horizon };
    for (long step = 0;; ++step) {
        if (step >= opt.max_steps)
            throw err("NumericalStall", "trace: exceeded " + std::to_string(opt.max_steps) + " steps");

        /* nearest forward crossing over this chart's material-left edges */
        double s_best = 0;
        int e_best = -1;
        for (int ei : m.chart_edges[ch]) {
            const auto& e = m.fedges[ei];
            const double den = dx * e.dy - dy * e.dx;
            if (den <= 1e-15) continue;
            const double rpx = e.px - px, rpy = e.py - py;
            const double s = (rpx * e.dy - rpy * e.dx) / den;
            if (s <= 1e-12 || (e_best >= 0 && s >= s_best)) continue;
            const double u = (rpx * dy - rpy * dx) / den;
            if (u < -1e-12 || u > 1 + 1e-12) continue;
            s_best = s;
            e_best = ei;
        }
        if (e_best < 0)
            throw err("NumericalStall", "trace: no exit edge from chart " + std::to_string(ch));
        const double s_lim = std::min(s_best, horizon - t);

        Ev kind = Ev::None;
        double par = 0;
        const SingularPoint* hit = nullptr;
        for (const SingularPoint& sp : m.singular_points) {
            if (sp.chart != ch) continue;
            const double vx = sp.x - px, vy = sp.y - py;
            if (std::fabs(vx * dy - vy * dx) >= snap) continue;
            const double q = vx * dx + vy * dy;
            if (q > 1e-12 && q <= s_lim + snap && (kind == Ev::None || q < par)) {
                kind = Ev::Sing;
                par = q;
                hit = &sp;
            }
        }
        if (opt.detect_closure && ch == ch0) {
            const double vx = p0x - px, vy = p0y - py;
            if (std::fabs(vx * dy - vy * dx) < snap) {
                const double q = vx * dx + vy * dy;
                if (q >= -snap && q <= s_lim + snap && t + q > snap &&
                    (kind == Ev::None || q < par)) {
                    kind = Ev::Closed;
                    par = q;
                }
            }
        }
        const double hrem = horizon - t;
        if (hrem <= s_best && (kind == Ev::None || hrem < par)) {
            kind = Ev::Horizon;
            par = hrem;
        }

        if (kind != Ev::None) {
            const double adv = std::max(par, 0.0);
            occ[ch] += adv;
            t += adv;
            res.end_chart = ch;
            res.end_x = px + adv * dx;
            res.end_y = py + adv * dy;
            if (kind == Ev::Sing) {
                res.termination = Termination::SingularityHit;
                res.hit_class = hit->cls;
                res.hit_chart = ch;
                res.hit_x = hit->x;
                res.hit_y = hit->y;
                res.end_x = hit->x;
                res.end_y = hit->y;
            } else if (kind == Ev::Closed) {
                res.termination = Termination::Closed;
                res.period = t;
            } else {
                res.termination = Termination::HorizonReached;
                t = horizon;
            }
            if (opt.record_path) res.path.push_back({t, ch, res.end_x, res.end_y});
            break;
        }

        occ[ch] += s_best;
        t += s_best;
        ++res.crossings;
        const auto& e = m.fedges[e_best];
        const double cx = px + s_best * dx, cy = py + s_best * dy;
        ch = e.target;
        px = cx + e.taux;
        py = cy + e.tauy;
        if (opt.record_path) res.path.push_back({t, ch, px, py});
    }

    res.elapsed = t;
    for (size_t i = 0; i < m.charts.size(); ++i)
        res.occupancy[m.charts[i].region_tag] += occ[i];
    return res;
}

bool check_saddle_realization(const PolygonModel& m, const FixSplitting& s,
                              const TwistPlan& plan, const TraceOptions& opt) {
    if (!same_side(s, plan.partners, plan.k))
        throw err("SameSideViolated", "check_saddle_realization: plan fails same_side");
    if (plan.k == 0) return true;

    const double wx = fd(plan.w_new.x), wy = fd(plan.w_new.y);
    const double L = std::hypot(wx, wy);
    if (!(L > 0)) throw GuaranteeViolated("twisted holonomy has zero length");
    const double th = std::atan2(wy, wx);
    const double dx = wx / L, dy = wy / L;
    const double delta = std::min(1e-7, L * 1e-9 + 1e-10);
    const double tol = std::max(1e-8, 1e-12 * L);
    TraceOptions topt = opt;
    topt.detect_closure = false;
    topt.record_path = false;

    for (int cls = 0; cls < (int)m.classes.size(); ++cls) {
        if (!m.classes[cls].singular) continue;
        bool good = false;
        for (const ModelWedge& w : m.wedges) {
            if (w.cls != cls || !(w.width > 0)) continue;
            double rel = std::fmod(w.a_in - th, kTwoPi);
            if (rel < 0) rel += kTwoPi;
            if (rel <= 1e-12 || rel >= w.width - 1e-12) continue;
            const TraceResult r = trace(m, w.chart, w.qx + delta * dx, w.qy + delta * dy,
                                        dx, dy, 1.02 * L + 1, topt);
            if (r.termination == Termination::SingularityHit &&
                std::fabs(r.elapsed + delta - L) < tol) {
                good = true;
                break;
            }
        }
        if (!good) return false;
    }
    return true;
}

OccupancySummary occupancy_experiment(const PolygonModel& m, double dir_x, double dir_y,
                                      double horizon, int samples, long seed,
                                      const TraceOptions& opt, const std::string& focus_tag) {
    if (samples <= 0) throw err("BadSampleCount", "occupancy_experiment: samples must be positive");
    OccupancySummary sum;
    sum.focus_tag = focus_tag.empty() ? m.charts.at(0).region_tag : focus_tag;
    sum.horizon = horizon;
    sum.seed = seed;
    const double dn = std::hypot(dir_x, dir_y);
    if (!(dn > 0)) throw err("ZeroDirection", "occupancy_experiment: direction must be nonzero");
    sum.dir_x = dir_x / dn;
    sum.dir_y = dir_y / dn;

    double focus_area = 0, total = 0;
    for (size_t i = 0; i < m.charts.size(); ++i) {
        total += m.fcharts[i].area;
        if (m.charts[i].region_tag == sum.focus_tag) focus_area += m.fcharts[i].area;
    }
    sum.area_fraction = focus_area / total;

    /* deterministic low-discrepancy starts: R2 sequence for the chart-local
       point, golden rotation for the area-weighted chart pick */
    constexpr double kA1 = 0.7548776662466927, kA2 = 0.5698402909980532;
    constexpr double kA3 = 0.6180339887498949;
    auto frac = [](double v) { return v - std::floor(v); };
    sum.rows.assign(samples, {});
    std::atomic<long> next{0};
    std::exception_ptr fail;
    std::mutex fail_mu;
    auto worker = [&]() {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= samples) return;
            try {
                double u = frac(0.5 + kA1 * (double)(seed + i + 1));
                double v = frac(0.5 + kA2 * (double)(seed + i + 1));
                const double cpick = frac(0.5 + kA3 * (double)(seed + i + 1));
                int ch = 0;
                double acc = 0;
                for (size_t c = 0; c < m.charts.size(); ++c) {
                    acc += m.fcharts[c].area / total;
                    if (cpick <= acc || c + 1 == m.charts.size()) { ch = (int)c; break; }
                }
                const auto& fc = m.fcharts[ch];
                TraceResult r;
                for (int attempt = 0;; ++attempt) {
                    const double sx = fc.ox + u * fc.e1x + v * fc.e2x;
                    const double sy = fc.oy + u * fc.e1y + v * fc.e2y;
                    try {
                        r = trace(m, ch, sx, sy, sum.dir_x, sum.dir_y, horizon, opt);
                        sum.rows[i] = {ch, sx, sy, r.elapsed,
                                       r.elapsed > 0 ? r.occupancy.at(sum.focus_tag) / r.elapsed : 0.0,
                                       r.termination};
                        break;
                    } catch (const Error& e) {
                        if (std::string(e.code()) != "StartAtSingularity" || attempt >= 3) throw;
                        u = frac(u + 0.0137);
                        v = frac(v + 0.0173);
                    }
                }
            } catch (...) {
                std::lock_guard<std::mutex> g(fail_mu);
                if (!fail) fail = std::current_exception();
                return;
            }
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned nt = std::min<unsigned>(hw, (unsigned)samples);
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (fail) std::rethrow_exception(fail);

    sum.lo = sum.hi = sum.rows[0].fraction;
    double acc = 0;
    for (const OccupancySample& r : sum.rows) {
        acc += r.fraction;
        sum.lo = std::min(sum.lo, r.fraction);
        sum.hi = std::max(sum.hi, r.fraction);
    }
    sum.mean = acc / samples;
    return sum;
}

} // namespace fixsplit
