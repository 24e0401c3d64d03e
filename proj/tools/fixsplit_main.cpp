#include <cmath>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fixsplit/io.hpp"

using namespace fixsplit;
namespace fs = std::filesystem;

namespace {

Json load_json(const std::string& path) {
    if (!fs::exists(path)) throw err("MissingFile", "no such file: " + path);
    std::ifstream in(path, std::ios::binary);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw err("ParseError", path + ": " + e.what());
    }
}

void write_text(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw err("WriteError", "cannot open " + p.string());
    out << text;
}

/* stdout when out_path is empty */
void emit(const Json& doc, const std::string& out_path) {
    std::string text = doc.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text(out_path, text);
}

struct BudgetFlags {
    std::string eps_prime, max_shift;
    long max_convergents = 0, max_scans = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--eps-prime", eps_prime, "search epsilon' as p/q or decimal");
        cmd->add_option("--max-convergents", max_convergents, "convergent-depth cap");
        cmd->add_option("--max-shift", max_shift, "cap on the resonant circumference shift |M|");
        cmd->add_option("--max-scans", max_scans, "work cap per enumeration pass");
    }
    SearchBudget resolve() const {
        SearchBudget b = make_default_budget();
        if (!eps_prime.empty()) {
            b.eps_prime = rat_from_string(eps_prime);
            if (b.eps_prime <= 0) throw err("ParseError", "--eps-prime must be positive");
        }
        if (max_convergents > 0) b.max_convergents = max_convergents;
        if (!max_shift.empty()) {
            Rat r = rat_from_string(max_shift);
            if (r.get_den() != 1 || r <= 0) throw err("ParseError", "--max-shift must be a positive integer");
            b.max_circumference_shift = r.get_num();
        }
        if (max_scans > 0) b.max_scans = max_scans;
        return b;
    }
    Json to_config() const {
        SearchBudget b = resolve();
        return Json{{"eps_prime", rat_to_string(b.eps_prime)},
                    {"max_convergents", b.max_convergents},
                    {"max_shift", b.max_circumference_shift.get_str()},
                    {"max_scans", b.max_scans}};
    }
};

FixSplitting load_input(const std::string& input) { return splitting_from_json(load_json(input)); }

PartnerTriple triple_from_file(const FixSplitting& s, const std::string& path) {
    Json j = load_json(path);
    if (j.contains("partners")) j = j.at("partners");   // accept a twist/plan artifact
    if (j.contains("triple")) j = j.at("triple");       // accept a partner-search artifact
    ScalarMode m = ScalarMode::exact(s.w.x.field());
    try {
        return make_partner_triple(s, vec_from_json(j.at("v1"), m), vec_from_json(j.at("v2"), m),
                                   vec_from_json(j.at("vc"), m));
    } catch (const Json::exception& e) {
        throw err("ParseError", path + ": " + e.what());
    }
}

int run_validate(const std::string& input, const std::string& out) {
    Json config{{"command", "validate"}, {"input", input}};
    FixSplitting s = load_input(input);
    ValidationReport rep = validate(s);
    Json checks = Json::object();
    for (const std::string& name : validation_check_names()) {
        bool failed = false;
        for (const std::string& v : rep.violations) failed = failed || v == name;
        checks[name] = !failed;
    }
    Json payload{{"valid", rep.ok()}, {"violations", rep.violations}, {"checks", checks}};
    bool irr = false;
    if (rep.ok()) {
        irr = is_irrational(s);
        Areas a = areas(s);
        payload["irrational"] = irr;
        payload["areas"] = Json{{"torus1", scalar_to_json(a.a1)},
                                {"torus2", scalar_to_json(a.a2)},
                                {"cylinder", scalar_to_json(a.ac)},
                                {"total", scalar_to_json(a.total)}};
    } else {
        payload["irrational"] = Json(nullptr);
    }
    emit(artifact("validation-report", config, payload), out);
    return rep.ok() && irr ? 0 : 1;
}

int run_partners(const std::string& input, const BudgetFlags& bf, const std::string& out) {
    Json config{{"command", "partners"}, {"input", input}, {"budget", bf.to_config()}};
    FixSplitting s = load_input(input);
    SearchBudget budget = bf.resolve();
    PartnerTriple t = search(s, budget);
    Json payload{{"triple", triple_to_json(t)},
                 {"good_partners", good_partners(s, t)},
                 {"crosses", Json{{"v1_w", scalar_to_json(cross(t.v1, s.w))},
                                  {"v2_w", scalar_to_json(cross(t.v2, s.w))},
                                  {"vc_w", scalar_to_json(cross(t.vc, s.w))}}}};
    emit(artifact("partner-search", config, payload), out);
    return 0;
}

int run_twist(const std::string& input, long k, const std::string& partners_file,
              const BudgetFlags& bf, const std::string& out, const std::string& splitting_out) {
    Json config{{"command", "twist"}, {"input", input}, {"k", k},
                {"partners_file", partners_file}, {"budget", bf.to_config()}};
    FixSplitting s = load_input(input);
    PartnerTriple t = partners_file.empty() ? search(s, bf.resolve())
                                            : triple_from_file(s, partners_file);
    TwistPlan plan = make_twist_plan(s, t, k);
    FixSplitting twisted = apply_twist(s, t, k);
    Areas before = areas(s), after = areas(twisted);
    bool conserved = s_cmp(before.total, after.total) == 0;
    if (!conserved) throw GuaranteeViolated("twist changed the total area");
    Json payload{{"plan", plan_to_json(plan)},
                 {"area_conserved", conserved},
                 {"irrational", is_irrational(twisted)},
                 {"result", splitting_to_json(twisted)}};
    emit(artifact("twist", config, payload), out);
    if (!splitting_out.empty())
        emit(artifact("splitting", config, splitting_to_json(twisted)), splitting_out);
    return 0;
}

int run_tree(const std::string& input, int depth, const std::string& eps0_str,
             const BudgetFlags& bf, long csv_limit, const std::string& outdir) {
    Rat eps0 = rat_from_string(eps0_str);
    if (eps0 <= 0) throw err("ParseError", "--eps0 must be positive");
    Json config{{"command", "tree"}, {"input", input}, {"depth", depth},
                {"eps0", rat_to_string(eps0)}, {"budget", bf.to_config()},
                {"paths_csv_limit", csv_limit}};
    FixSplitting s = load_input(input);
    SplittingTree t = build_tree(s, eps0, depth, bf.resolve());
    TreeAudit ta = audit(t);
    if (!ta.ok) throw GuaranteeViolated("tree audit failed: " + ta.violations.front());
    DirectionSeparation sep = distinct_directions(t);

    std::vector<long> leaves = t.leaves();
    bool paths_ok = true;
    long csv_written = 0;
    for (long leaf : leaves) {
        PathReport rep = audit_path(t, leaf);
        paths_ok = paths_ok && rep.ok();
        if (csv_written < csv_limit) {
            std::ostringstream os;
            Json csv_config = config;
            csv_config["leaf"] = leaf;
            write_path_csv(os, csv_config, rep);
            char name[32];
            std::snprintf(name, sizeof name, "path_%04ld.csv", leaf);
            write_text(fs::path(outdir) / name, os.str());
            ++csv_written;
        }
    }
    Json payload{{"audit", Json{{"ok", ta.ok},
                                {"edges_checked", ta.edges_checked},
                                {"violations", ta.violations}}},
                 {"paths_ok", paths_ok},
                 {"separation", Json{{"leaf_count", sep.leaf_count},
                                     {"all_distinct", sep.all_distinct},
                                     {"min_angle", sep.min_angle}}},
                 {"paths_csv_written", csv_written},
                 {"tree", tree_to_json(t)}};
    Json doc = artifact("tree", config, payload);
    write_text(fs::path(outdir) / "tree.json", doc.dump(2) + "\n");
    std::cout << "tree: nodes=" << t.nodes.size() << " leaves=" << sep.leaf_count
              << " complete=" << (t.complete ? "yes" : "no")
              << " audit=" << (ta.ok ? "ok" : "FAIL")
              << " paths=" << (paths_ok ? "ok" : "FAIL")
              << " distinct=" << (sep.all_distinct ? "yes" : "NO") << "\n";
    if (!t.complete) {
        std::cerr << "tree incomplete: budget exhausted at " << t.incomplete.size()
                  << " node(s); retry with --max-convergents/--max-scans raised\n";
        return 3;
    }
    return paths_ok && sep.all_distinct ? 0 : 4;
}

int run_audit(const std::string& input, int depth, const std::string& eps0_str,
              const BudgetFlags& bf, const std::string& out) {
    Json config{{"command", "audit"}, {"input", input}, {"depth", depth},
                {"eps0", eps0_str}, {"budget", bf.to_config()}};
    FixSplitting s = load_input(input);
    ValidationReport rep = validate(s);
    if (!rep.ok()) throw err("InvalidSplitting", rep.violations.front());

    PolygonModel m = build_model(s);
    int singular = 0;
    bool angles_ok = true;
    for (const VertexClass& c : m.classes) {
        if (!c.singular) continue;
        ++singular;
        angles_ok = angles_ok && std::fabs(c.angle - 6 * 3.14159265358979323846) <= 1e-9;
    }
    bool area_ok = s_cmp(m.total_area, areas(s).total) == 0;
    Json payload{{"model", Json{{"singular_classes", singular},
                                {"cone_angles_6pi", angles_ok},
                                {"area_matches", area_ok},
                                {"charts", (long)m.charts.size()},
                                {"edges", (long)m.edges.size()}}}};
    bool ok = singular == 2 && angles_ok && area_ok;

    if (depth > 0) {
        Rat eps0 = rat_from_string(eps0_str);
        if (eps0 <= 0) throw err("ParseError", "--eps0 must be positive");
        SplittingTree t = build_tree(s, eps0, depth, bf.resolve());
        TreeAudit ta = audit(t);
        DirectionSeparation sep = distinct_directions(t);
        bool paths_ok = true;
        for (long leaf : t.leaves()) paths_ok = paths_ok && audit_path(t, leaf).ok();
        payload["tree"] = Json{{"complete", t.complete},
                               {"audit_ok", ta.ok},
                               {"violations", ta.violations},
                               {"edges_checked", ta.edges_checked},
                               {"paths_ok", paths_ok},
                               {"all_distinct", sep.all_distinct},
                               {"min_angle", sep.min_angle}};
        ok = ok && t.complete && ta.ok && paths_ok && sep.all_distinct;
    }
    payload["ok"] = ok;
    emit(artifact("audit", config, payload), out);
    return ok ? 0 : 1;
}

struct SimFlags {
    std::string input, fixture, tree_file;
    long leaf = -1;
    double dx = 0, dy = 0;
    double horizon = 1e4;
    long samples = 0;
    long seed = 0;
    bool single_trace = false;
    int chart = 0;
    double x0 = 0, y0 = 0;
    std::string focus;
    std::string outdir = ".";
};

int run_simulate(const SimFlags& f) {
    if (f.horizon <= 0) throw err("ParseError", "--horizon must be positive");
    Json config{{"command", "simulate"},
                {"input", f.input},
                {"fixture", f.fixture},
                {"tree_file", f.tree_file},
                {"leaf", f.leaf},
                {"direction", Json::array({f.dx, f.dy})},
                {"horizon", f.horizon},
                {"samples", f.samples},
                {"seed", f.seed},
                {"trace", f.single_trace},
                {"chart", f.chart},
                {"start", Json::array({f.x0, f.y0})},
                {"focus", f.focus}};

    PolygonModel model;
    if (!f.fixture.empty()) {
        if (f.fixture != "square") throw err("ParseError", "unknown fixture: " + f.fixture);
        if (!f.input.empty()) throw err("ParseError", "--fixture and input are exclusive");
        model = make_square_torus_fixture();
    } else {
        if (f.input.empty()) throw err("ParseError", "need a splitting input or --fixture");
        model = build_model(load_input(f.input));
    }

    double dx = f.dx, dy = f.dy;
    if (!f.tree_file.empty()) {
        Json tj = load_json(f.tree_file);
        if (tj.contains("tree")) tj = tj.at("tree");
        try {
            const Json& nodes = tj.at("nodes");
            long idx = f.leaf >= 0 ? f.leaf : (long)nodes.size() - 1;
            if (idx < 0 || idx >= (long)nodes.size())
                throw err("ParseError", "--leaf out of range");
            /* direction vectors live in the exact field of the tree's splitting */
            FieldPtr fld = field_from_json(load_json(f.input).at("field"));
            Vec w = vec_from_json(nodes[(size_t)idx].at("w"), ScalarMode::exact(fld));
            dx = s_to_double(w.x);
            dy = s_to_double(w.y);
            config["direction"] = Json::array({dx, dy});
        } catch (const Json::exception& e) {
            throw err("ParseError", f.tree_file + ": " + e.what());
        }
    }
    if (dx == 0 && dy == 0) throw err("ParseError", "need --dx/--dy or --tree");

    if (f.samples > 0) {
        OccupancySummary o = occupancy_experiment(model, dx, dy, f.horizon, (int)f.samples,
                                                  f.seed, TraceOptions{}, f.focus);
        Json doc = artifact("occupancy", config, occupancy_to_json(o));
        write_text(fs::path(f.outdir) / "occupancy.json", doc.dump(2) + "\n");
        std::ostringstream os;
        write_occupancy_csv(os, config, o);
        write_text(fs::path(f.outdir) / "occupancy.csv", os.str());
        std::cout << "occupancy: tag=" << o.focus_tag << " area_fraction=" << o.area_fraction
                  << " mean=" << o.mean << " range=[" << o.lo << ", " << o.hi << "]\n";
    }
    if (f.single_trace || f.samples <= 0) {
        TraceOptions opt;
        opt.record_path = true;
        TraceResult r = trace(model, f.chart, f.x0, f.y0, dx, dy, f.horizon, opt);
        Json doc = artifact("trace", config, trace_to_json(r));
        write_text(fs::path(f.outdir) / "trace.json", doc.dump(2) + "\n");
        std::ostringstream os;
        write_trajectory_csv(os, config, r);
        write_text(fs::path(f.outdir) / "trajectory.csv", os.str());
        const char* term = r.termination == Termination::SingularityHit ? "singularity"
                         : r.termination == Termination::Closed ? "closed" : "horizon";
        std::cout << "trace: termination=" << term << " elapsed=" << format_double(r.elapsed)
                  << " crossings=" << r.crossings;
        if (r.termination == Termination::Closed)
            std::cout << " period=" << format_double(r.period);
        std::cout << "\n";
    }
    return 0;
}

int run_preset(const std::string& name, const std::string& out) {
    Json config{{"command", "preset"}, {"name", name}};
    FixSplitting s = preset_splitting(name);   // validated on emission
    (void)s;
    emit(artifact("splitting", config, preset_json(name)), out);
    return 0;
}

int exit_code_for(const Error& e) {
    const std::string& c = e.code();
    if (c == "ParseError" || c == "MissingFile" || c == "UnknownPreset") return 2;
    if (c == "BudgetExhausted") return 3;
    if (c == "GuaranteeViolated") return 4;
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"2T2C fix-splitting toolkit: exact splittings, Dehn twists, partner search,\n"
                 "direction trees, and a polygon flow simulator"};
    app.require_subcommand(1);

    std::string input, out, outdir = ".";

    auto* c_validate = app.add_subcommand("validate", "check splitting invariants + irrationality");
    c_validate->add_option("input", input, "splitting JSON file")->required();
    c_validate->add_option("-o,--out", out, "report file (default stdout)");

    BudgetFlags bf_partners;
    auto* c_partners = app.add_subcommand("partners", "search good partner triples");
    c_partners->add_option("input", input, "splitting JSON file")->required();
    c_partners->add_option("-o,--out", out, "artifact file (default stdout)");
    bf_partners.attach(c_partners);

    long twist_k = 1;
    std::string partners_file, splitting_out;
    BudgetFlags bf_twist;
    auto* c_twist = app.add_subcommand("twist", "apply the k-th Dehn twist");
    c_twist->add_option("input", input, "splitting JSON file")->required();
    c_twist->add_option("-k,--k", twist_k, "twist exponent")->required();
    c_twist->add_option("--partners", partners_file, "partner triple JSON (default: search)");
    c_twist->add_option("-o,--out", out, "artifact file (default stdout)");
    c_twist->add_option("--splitting-out", splitting_out, "also write the twisted splitting");
    bf_twist.attach(c_twist);

    int depth = 8;
    std::string eps0 = "1/100";
    long csv_limit = 8;
    BudgetFlags bf_tree;
    auto* c_tree = app.add_subcommand("tree", "build + audit the twist direction tree");
    c_tree->add_option("input", input, "splitting JSON file")->required();
    c_tree->add_option("-d,--depth", depth, "tree depth")->check(CLI::Range(0, 40));
    c_tree->add_option("--eps0", eps0, "root angular budget (p/q or decimal)");
    c_tree->add_option("--paths-csv-limit", csv_limit, "max per-leaf path CSVs to write");
    c_tree->add_option("-o,--outdir", outdir, "output directory");
    bf_tree.attach(c_tree);

    int audit_depth = 0;
    std::string audit_eps0 = "1/100";
    BudgetFlags bf_audit;
    auto* c_audit = app.add_subcommand("audit", "model audit; --depth > 0 re-derives a tree");
    c_audit->add_option("input", input, "splitting JSON file")->required();
    c_audit->add_option("-d,--depth", audit_depth, "tree depth to re-derive (0 = model only)")
        ->check(CLI::Range(0, 40));
    c_audit->add_option("--eps0", audit_eps0, "root angular budget");
    c_audit->add_option("-o,--out", out, "artifact file (default stdout)");
    bf_audit.attach(c_audit);

    SimFlags sim;
    auto* c_sim = app.add_subcommand("simulate", "straight-line flow traces + occupancy");
    c_sim->add_option("input", sim.input, "splitting JSON file");
    c_sim->add_option("--fixture", sim.fixture, "built-in model (square)");
    c_sim->add_option("--dx", sim.dx, "direction x");
    c_sim->add_option("--dy", sim.dy, "direction y");
    c_sim->add_option("--tree", sim.tree_file, "take the direction from a tree artifact");
    c_sim->add_option("--leaf", sim.leaf, "node index in --tree (default: last node)");
    c_sim->add_option("--horizon", sim.horizon, "flow time horizon");
    c_sim->add_option("--samples", sim.samples, "occupancy experiment sample count");
    c_sim->add_option("--seed", sim.seed, "quasi-random start seed");
    c_sim->add_flag("--trace", sim.single_trace, "record a single trajectory");
    c_sim->add_option("--chart", sim.chart, "trace start chart");
    c_sim->add_option("--x0", sim.x0, "trace start x");
    c_sim->add_option("--y0", sim.y0, "trace start y");
    c_sim->add_option("--focus", sim.focus, "occupancy focus region tag");
    c_sim->add_option("-o,--outdir", sim.outdir, "output directory");

    std::string preset_name;
    auto* c_preset = app.add_subcommand("preset", "emit a named splitting");
    c_preset->add_option("name", preset_name, "demo-sqrt2 | arnoux-yoccoz")->required();
    c_preset->add_option("-o,--out", out, "splitting file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(c_validate)) return run_validate(input, out);
        if (app.got_subcommand(c_partners)) return run_partners(input, bf_partners, out);
        if (app.got_subcommand(c_twist))
            return run_twist(input, twist_k, partners_file, bf_twist, out, splitting_out);
        if (app.got_subcommand(c_tree))
            return run_tree(input, depth, eps0, bf_tree, csv_limit, outdir);
        if (app.got_subcommand(c_audit))
            return run_audit(input, audit_depth, audit_eps0, bf_audit, out);
        if (app.got_subcommand(c_sim)) return run_simulate(sim);
        if (app.got_subcommand(c_preset)) return run_preset(preset_name, out);
    } catch (const BudgetExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const GuaranteeViolated& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
