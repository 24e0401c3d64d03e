#include "fixsplit/io.hpp"

#include <cstdio>
#include <ostream>

namespace fixsplit {
namespace {

Rat rat_from_node(const Json& j) {
    if (j.is_string()) return rat_from_string(j.get<std::string>());
    if (j.is_number()) return rat_from_string(j.dump());
    throw err("ParseError", "expected a rational (string or number), got " + j.dump());
}

Int int_from_node(const Json& j) {
    Rat r = rat_from_node(j);
    if (r.get_den() != 1)
        throw err("ParseError", "expected an integer, got " + j.dump());
    return r.get_num();
}

const char* term_str(Termination t) {
    switch (t) {
        case Termination::SingularityHit: return "singularity";
        case Termination::Closed: return "closed";
        default: return "horizon";
    }
}

void csv_prelude(std::ostream& os, const Json& config) {
    os << "# fixsplit " << kLibraryVersion << "\n";
    os << "# config " << config.dump() << "\n";
}

} // namespace

Json field_to_json(const FieldPtr& f) {
    if (!f) return Json(nullptr);
    Json poly = Json::array();
    for (const Int& c : f->poly()) poly.push_back(c.get_str());
    return Json{{"min_poly", poly},
                {"root_interval", Json::array({rat_to_string(f->lo()), rat_to_string(f->hi())})}};
}

FieldPtr field_from_json(const Json& j) {
    try {
        if (!j.is_object()) throw err("ParseError", "field must be an object");
        std::vector<Int> poly;
        for (const Json& c : j.at("min_poly")) poly.push_back(int_from_node(c));
        const Json& iv = j.at("root_interval");
        if (!iv.is_array() || iv.size() != 2)
            throw err("ParseError", "root_interval must be [lo, hi]");
        return NumberField::make(std::move(poly), rat_from_node(iv[0]), rat_from_node(iv[1]));
    } catch (const Json::exception& e) {
        throw err("ParseError", std::string("field: ") + e.what());
    }
}

Json scalar_to_json(const Scalar& a) {
    if (a.is_float()) return Json(a.raw_float());
    const std::vector<Rat>& c = a.coeffs();
    bool rational = true;
    for (size_t i = 1; i < c.size(); ++i)
        if (c[i] != 0) { rational = false; break; }
    if (rational) return Json(rat_to_string(c.empty() ? Rat(0) : c[0]));
    Json arr = Json::array();
    for (const Rat& x : c) arr.push_back(rat_to_string(x));
    return Json{{"theta_coeffs", arr}};
}

Scalar scalar_from_json(const Json& j, const ScalarMode& m) {
    if (j.is_string() || j.is_number_integer() || j.is_number_unsigned())
        return Scalar::from_rat(m, rat_from_node(j));
    if (j.is_number_float()) {
        if (m.is_exact())
            throw err("ParseError",
                      "exact mode requires rational strings or theta_coeffs, got " + j.dump());
        return Scalar::from_double(j.get<double>());
    }
    if (j.is_object() && j.contains("theta_coeffs")) {
        if (!m.is_exact())
            throw err("ParseError", "theta_coeffs requires an exact-mode field");
        std::vector<Rat> coeffs;
        for (const Json& c : j.at("theta_coeffs")) coeffs.push_back(rat_from_node(c));
        return Scalar::exact(m.field, std::move(coeffs));
    }
    throw err("ParseError", "bad coordinate: " + j.dump());
}

Json vec_to_json(const Vec& v) {
    return Json{{"x", scalar_to_json(v.x)}, {"y", scalar_to_json(v.y)}};
}

Vec vec_from_json(const Json& j, const ScalarMode& m) {
    try {
        return Vec{scalar_from_json(j.at("x"), m), scalar_from_json(j.at("y"), m)};
    } catch (const Json::exception& e) {
        throw err("ParseError", std::string("vector: ") + e.what());
    }
}

Json lattice_to_json(const Lattice& l) {
    return Json{{"b1", vec_to_json(l.b1)}, {"b2", vec_to_json(l.b2)}};
}

Json splitting_to_json(const FixSplitting& s) {
    return Json{{"field", field_to_json(s.w.x.field())},
                {"lat1", lattice_to_json(s.lat1)},
                {"lat2", lattice_to_json(s.lat2)},
                {"cyl", Json{{"b1", vec_to_json(s.cyl.lattice.b1)},
                             {"b2", vec_to_json(s.cyl.lattice.b2)},
                             {"circumference", vec_to_json(s.cyl.circumference)}}},
                {"w", vec_to_json(s.w)}};
}

FixSplitting splitting_from_json(const Json& j) {
    try {
        ScalarMode m = ScalarMode::exact(field_from_json(j.at("field")));
        auto lat = [&](const Json& lj) {
            return make_lattice(vec_from_json(lj.at("b1"), m), vec_from_json(lj.at("b2"), m));
        };
        const Json& cj = j.at("cyl");
        return FixSplitting{lat(j.at("lat1")), lat(j.at("lat2")),
                            CylinderClass{lat(cj), vec_from_json(cj.at("circumference"), m)},
                            vec_from_json(j.at("w"), m)};
    } catch (const Json::exception& e) {
        throw err("ParseError", std::string("splitting: ") + e.what());
    }
}

FixSplitting to_float_mode(const FixSplitting& s) {
    auto fs = [](const Scalar& a) { return Scalar::from_double(s_to_double(a)); };
    auto fv = [&](const Vec& v) { return Vec{fs(v.x), fs(v.y)}; };
    auto fl = [&](const Lattice& l) { return make_lattice_raw(fv(l.b1), fv(l.b2)); };
    return FixSplitting{fl(s.lat1), fl(s.lat2),
                        CylinderClass{fl(s.cyl.lattice), fv(s.cyl.circumference)}, fv(s.w)};
}

Json triple_to_json(const PartnerTriple& p) {
    return Json{{"v1", vec_to_json(p.v1)}, {"v2", vec_to_json(p.v2)},
                {"vc", vec_to_json(p.vc)}, {"orientation", p.orientation}};
}

Json plan_to_json(const TwistPlan& p) {
    return Json{{"partners", triple_to_json(p.partners)},
                {"k", p.k},
                {"w_new", vec_to_json(p.w_new)},
                {"bounds", Json::array({scalar_to_json(p.bounds.first),
                                        scalar_to_json(p.bounds.second)})}};
}

Json tree_to_json(const SplittingTree& t) {
    Json nodes = Json::array();
    for (size_t i = 0; i < t.nodes.size(); ++i) {
        const TreeNode& n = t.nodes[i];
        Json bounds = n.parent < 0
            ? Json(nullptr)
            : Json::array({scalar_to_json(n.bounds.first), scalar_to_json(n.bounds.second)});
        nodes.push_back(Json{{"index", (long)i},
                             {"depth", n.depth},
                             {"parent", n.parent},
                             {"k", n.k},
                             {"eps", rat_to_string(n.eps)},
                             {"w", vec_to_json(n.s.w)},
                             {"slope", slope_key(n.s.w)},
                             {"bounds", bounds},
                             {"children", Json::array({n.children[0], n.children[1]})},
                             {"expanded", n.expanded}});
    }
    Json incomplete = Json::array();
    for (long i : t.incomplete) incomplete.push_back(i);
    return Json{{"complete", t.complete},
                {"node_count", (long)t.nodes.size()},
                {"leaf_count", (long)t.leaves().size()},
                {"incomplete", incomplete},
                {"nodes", nodes}};
}

Json model_to_json(const PolygonModel& m) {
    Json charts = Json::array();
    for (const ModelChart& c : m.charts)
        charts.push_back(Json{{"tag", c.region_tag},
                              {"origin", vec_to_json(c.origin)},
                              {"span1", vec_to_json(c.span1)},
                              {"span2", vec_to_json(c.span2)},
                              {"area", scalar_to_json(c.area)}});
    Json edges = Json::array();
    for (const ModelEdge& e : m.edges)
        edges.push_back(Json{{"name", e.name},
                             {"chart", e.chart},
                             {"p", vec_to_json(e.p)},
                             {"q", vec_to_json(e.q)},
                             {"target", e.target},
                             {"tau", vec_to_json(e.tau)},
                             {"twin", e.twin}});
    Json classes = Json::array();
    for (const VertexClass& c : m.classes)
        classes.push_back(Json{{"angle", c.angle}, {"wedges", c.wedges},
                               {"singular", c.singular}});
    Json sing = Json::array();
    for (const SingularPoint& p : m.singular_points)
        sing.push_back(Json{{"chart", p.chart}, {"x", p.x}, {"y", p.y}, {"class", p.cls}});
    return Json{{"mode", m.mode.is_exact() ? "exact" : "float"},
                {"total_area", scalar_to_json(m.total_area)},
                {"charts", charts},
                {"edges", edges},
                {"classes", classes},
                {"singular_points", sing}};
}

Json occupancy_to_json(const OccupancySummary& o) {
    Json rows = Json::array();
    for (const OccupancySample& r : o.rows)
        rows.push_back(Json{{"chart", r.chart}, {"x", r.x}, {"y", r.y},
                            {"elapsed", r.elapsed}, {"fraction", r.fraction},
                            {"termination", term_str(r.termination)}});
    return Json{{"focus_tag", o.focus_tag},
                {"area_fraction", o.area_fraction},
                {"mean", o.mean},
                {"lo", o.lo},
                {"hi", o.hi},
                {"direction", Json::array({o.dir_x, o.dir_y})},
                {"horizon", o.horizon},
                {"seed", o.seed},
                {"samples", rows}};
}

Json trace_to_json(const TraceResult& r) {
    Json occ = Json::object();
    for (const auto& [tag, v] : r.occupancy) occ[tag] = v;
    Json out{{"termination", term_str(r.termination)},
             {"elapsed", r.elapsed},
             {"crossings", r.crossings},
             {"occupancy", occ},
             {"end", Json{{"chart", r.end_chart}, {"x", r.end_x}, {"y", r.end_y}}}};
    if (r.termination == Termination::SingularityHit)
        out["hit"] = Json{{"class", r.hit_class}, {"chart", r.hit_chart},
                          {"x", r.hit_x}, {"y", r.hit_y}};
    if (r.termination == Termination::Closed) out["period"] = r.period;
    return out;
}

Json artifact(const std::string& kind, const Json& config, const Json& payload) {
    Json a;
    a["artifact"] = kind;
    a["version"] = kLibraryVersion;
    a["config"] = config;
    for (const auto& [key, value] : payload.items()) a[key] = value;
    return a;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_path_csv(std::ostream& os, const Json& config, const PathReport& rep) {
    csv_prelude(os, config);
    os << "n,k,hn,an,partial_sum,area1,area2,|w|\n";
    for (const PathRow& r : rep.rows)
        os << r.n << ',' << r.k << ',' << format_double(r.hn) << ','
           << format_double(r.an) << ',' << format_double(r.partial_sum) << ','
           << format_double(r.area1) << ',' << format_double(r.area2) << ','
           << format_double(r.abs_w) << '\n';
}

void write_trajectory_csv(std::ostream& os, const Json& config, const TraceResult& r) {
    csv_prelude(os, config);
    os << "time,chart,x,y\n";
    for (const TracePoint& p : r.path)
        os << format_double(p.t) << ',' << p.chart << ',' << format_double(p.x) << ','
           << format_double(p.y) << '\n';
}

void write_occupancy_csv(std::ostream& os, const Json& config, const OccupancySummary& o) {
    csv_prelude(os, config);
    os << "sample,chart,x0,y0,elapsed,fraction,termination\n";
    for (size_t i = 0; i < o.rows.size(); ++i) {
        const OccupancySample& r = o.rows[i];
        os << i << ',' << r.chart << ',' << format_double(r.x) << ',' << format_double(r.y)
           << ',' << format_double(r.elapsed) << ',' << format_double(r.fraction) << ','
           << term_str(r.termination) << '\n';
    }
}

Json preset_json(const std::string& name) {
    if (name == "demo-sqrt2") {
        Json sqrt2{{"theta_coeffs", Json::array({"0", "1"})}};
        Json one_plus_sqrt2{{"theta_coeffs", Json::array({"1", "1"})}};
        return Json{
            {"field", Json{{"min_poly", Json::array({"-2", "0", "1"})},
                           {"root_interval", Json::array({"1", "2"})}}},
            {"lat1", Json{{"b1", Json{{"x", "1"}, {"y", "0"}}},
                          {"b2", Json{{"x", sqrt2}, {"y", "1"}}}}},
            {"lat2", Json{{"b1", Json{{"x", "1"}, {"y", "0"}}},
                          {"b2", Json{{"x", one_plus_sqrt2}, {"y", "1"}}}}},
            {"cyl", Json{{"b1", Json{{"x", "0"}, {"y", "1"}}},
                         {"b2", Json{{"x", "1/2"}, {"y", "1/3"}}},
                         {"circumference", Json{{"x", "0"}, {"y", "1"}}}}},
            {"w", Json{{"x", "0"}, {"y", "1"}}}};
    }
    if (name == "arnoux-yoccoz")
        throw err("NotShipped",
                  "arnoux-yoccoz: the genus-3 Arnoux-Yoccoz splitting coordinates are cited "
                  "from external literature and are not bundled; supply a splitting JSON once "
                  "sourced coordinates pass `fixsplit validate`");
    throw err("UnknownPreset", name);
}

FixSplitting preset_splitting(const std::string& name) {
    FixSplitting s = splitting_from_json(preset_json(name));
    ValidationReport rep = validate(s);
    if (!rep.ok())
        throw GuaranteeViolated("preset " + name + " failed validation: " + rep.violations[0]);
    return s;
}

} // namespace fixsplit
