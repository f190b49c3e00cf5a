// relspine: command-line front end.
// Exit codes: 0 pass, 1 verification failure, 2 input error.

#include <bit>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "relspine/complex.hpp"
#include "relspine/enumerate.hpp"
#include "relspine/errors.hpp"
#include "relspine/formulas.hpp"
#include "relspine/free_group.hpp"
#include "relspine/io.hpp"
#include "relspine/marked.hpp"
#include "relspine/metric.hpp"
#include "relspine/parallel.hpp"
#include "relspine/spine.hpp"

using namespace relspine;
namespace fs = std::filesystem;

namespace {

struct Config {
    int n = 0;
    std::string s;
    std::optional<int> c;
    std::optional<int> edge_cap;
    bool reduced = false;
    bool force = false;
    bool homology = false;
    std::string out;
    std::string file;
    std::string target;
    int vertex = -1;
    int bound = 2;
    int radius = 2;
    int rank = 2;
    int n_max = 6;
    int s_max = 3;
    double tolerance = 1e-9;
    bool brute = false;
    bool no_barbells = false;
    bool pre = false;
    bool rational = false;
    std::string automorphisms;
};

BasisSpec basis_of(const Config& cfg) { return BasisSpec(cfg.n, parse_factor_list(cfg.s)); }

EnumerationOptions enum_options(const Config& cfg)
{
    EnumerationOptions o;
    o.edge_cap = cfg.edge_cap;
    o.reduced = cfg.reduced;
    o.force = cfg.force;
    return o;
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::string out_path(const Config& cfg, const std::string& name) { return (fs::path(cfg.out) / name).string(); }

Json validate_one(const GraphFile& f, bool pre, bool& ok)
{
    const auto violations = pre ? validate_pre_agraph(f.graph) : validate_agraph(f.graph);
    Json report;
    report["valid"] = violations.empty();
    Json vs = Json::array();
    for (const auto& v : violations) vs.push_back({{"kind", to_string(v.kind)}, {"message", v.message}});
    report["violations"] = vs;
    ok = violations.empty();
    if (ok) report["key"] = canonical_form(f.graph);
    if (f.marked) {
        const auto errs = validate_marking(*f.marked);
        report["marking_errors"] = errs;
        ok = ok && errs.empty();
    }
    if (f.lengths) report["normalized"] = is_normalized(f.graph, *f.lengths);
    return report;
}

int cmd_validate(const Config& cfg)
{
    const Json j = read_json_file(cfg.file);
    bool all_ok = true;
    Json report;
    auto load = [&](const Json& g, const std::string& where) {
        try {
            return graph_from_json(g);
        } catch (const InputError& e) {
            throw InputError(cfg.file + where + ": " + e.what());
        }
    };
    if (j.is_array()) {
        Json rows = Json::array();
        for (std::size_t i = 0; i < j.size(); ++i) {
            bool ok = true;
            rows.push_back(validate_one(load(j[i], "[" + std::to_string(i) + "]"), cfg.pre, ok));
            all_ok = all_ok && ok;
        }
        report = {{"file", cfg.file}, {"graphs", rows}, {"valid", all_ok}};
    } else {
        report = validate_one(load(j, ""), cfg.pre, all_ok);
        report["file"] = cfg.file;
    }
    emit(report);
    return all_ok ? 0 : 1;
}

int cmd_enumerate(const Config& cfg)
{
    const BasisSpec basis = basis_of(cfg);
    const auto result = enumerate_agraph_types(basis, enum_options(cfg));
    Json report;
    report["n"] = basis.rank();
    report["s"] = basis.factor_ranks();
    report["edge_cap"] = result.edge_cap;
    report["count"] = result.types.size();
    report["keys"] = result.keys;
    if (!cfg.out.empty()) {
        Json all = Json::array();
        for (std::size_t i = 0; i < result.types.size(); ++i) {
            all.push_back(graph_to_json(result.types[i]));
            write_file_atomic(out_path(cfg, "type_" + std::to_string(i) + ".dot"), to_dot(result.types[i], "type_" + std::to_string(i)));
        }
        write_file_atomic(out_path(cfg, "types.json"), all.dump(2) + "\n");
        // Round trip: every written graph re-validates to the same key.
        for (std::size_t i = 0; i < all.size(); ++i) {
            const GraphFile back = graph_from_json(all[i]);
            if (!is_valid_agraph(back.graph) || canonical_form(back.graph) != result.keys[i])
                throw VerificationError("round trip failed for type " + std::to_string(i));
        }
        report["written"] = cfg.out;
    }
    emit(report);
    return 0;
}

Json poset_report(const TypePoset& tp, const Config& cfg, const std::string& stem)
{
    const auto complex = order_complex(tp.poset);
    Json report;
    report["elements"] = tp.poset.size();
    report["dimension"] = complex.empty() ? -1 : complex.dimension();
    report["f_vector"] = complex.empty() ? std::vector<long long>{} : complex.f_vector();
    if (cfg.homology && !complex.empty()) {
        const auto h = homology(complex);
        report["homology"] = homology_to_json(h);
        report["acyclic"] = is_acyclic(h);
    }
    if (!cfg.out.empty()) {
        write_file_atomic(out_path(cfg, stem + "_complex.json"), complex_to_json(complex).dump(2) + "\n");
        write_file_atomic(out_path(cfg, stem + "_hasse.dot"), hasse_dot(tp.poset, stem));
    }
    return report;
}

int cmd_spine(const Config& cfg, bool small)
{
    const BasisSpec basis = basis_of(cfg);
    const auto tp = collapse_poset(basis, enum_options(cfg));
    const FactorSignature sig{cfg.n, parse_factor_list(cfg.s), std::nullopt};
    Json report = small ? poset_report(small_spine(tp), cfg, "small_spine") : poset_report(tp, cfg, "spine");
    report["n"] = basis.rank();
    report["s"] = basis.factor_ranks();
    report["reduced"] = cfg.reduced;
    if (small && sig.k() > 0) report["formula"] = dim_small_spine(sig);
    if (!small) report["formula"] = dim_relative_spine(sig);
    emit(report);
    if (cfg.homology && report.contains("acyclic") && !report["acyclic"].get<bool>()) return 1;
    return 0;
}

int cmd_homology(const Config& cfg)
{
    SimplicialComplex c;
    if (!cfg.file.empty())
        c = complex_from_json(read_json_file(cfg.file));
    else
        c = order_complex(collapse_poset(basis_of(cfg), enum_options(cfg)).poset);
    const auto h = homology(c);
    Json report = homology_to_json(h);
    report["acyclic"] = is_acyclic(h);
    int code = 0;
    if (cfg.rational) {
        const auto q = rational_betti(c);
        report["rational_betti"] = q;
        if (q != h.betti) code = 1;
    }
    if (!cfg.out.empty()) write_file_atomic(out_path(cfg, "homology.json"), report.dump(2) + "\n");
    emit(report);
    return code;
}

int cmd_links(const Config& cfg)
{
    const GraphFile f = read_graph_file(cfg.file);
    const auto violations = validate_agraph(f.graph);
    if (!violations.empty()) throw InputError("graph is not an A-graph: " + violations.front().message);
    const auto vmask = f.graph.vertex_wedge_mask();
    Json rows = Json::array();
    bool ok = true;
    for (Vertex v = 0; v < f.graph.graph.num_vertices(); ++v) {
        if (cfg.vertex >= 0 && v != cfg.vertex) continue;
        const auto lc = link_complexes(f.graph, v);
        const int wedges = std::popcount(vmask[static_cast<std::size_t>(v)]);
        Json row{{"vertex", v}, {"valence", f.graph.graph.valence(v)}, {"wedges", wedges},
                 {"ideal_edges", lc.ideal.size()}, {"legal_edges", lc.legal.size()}};
        if (!lc.L.empty()) {
            const auto col = collapse_greedy(lc.L);
            row["L_dimension"] = lc.L.dimension();
            row["L_collapsible"] = col.collapsible;
            if (wedges >= 2 && !col.collapsible) ok = false;
        } else {
            row["L_collapsible"] = false;
            if (wedges >= 2) ok = false;
        }
        rows.push_back(row);
    }
    if (cfg.vertex >= 0 && rows.empty()) throw InputError("no vertex " + std::to_string(cfg.vertex));
    emit(Json{{"file", cfg.file}, {"vertices", rows}, {"passed", ok}});
    return ok ? 0 : 1;
}

int cmd_lipschitz(const Config& cfg)
{
    const MetricGraph src = metric_from_file(read_graph_file(cfg.file));
    const MetricGraph tgt = metric_from_file(read_graph_file(cfg.target));
    const GraphMap f = comparison_map(src, tgt);
    const auto which = cfg.no_barbells ? Candidates::cycles_and_figure_eights : Candidates::with_barbells;
    const auto lip = lipschitz(f, which);
    Json report;
    report["lipschitz"] = lip.value;
    report["witness"] = path_to_json(lip.witness);
    report["map_lipschitz"] = map_lipschitz(f);
    Json images = Json::array();
    for (const auto& p : f.edge_images) images.push_back(path_to_json(p));
    report["edge_images"] = images;
    const auto opt = is_optimal(f);
    report["gamma_f"] = opt.gamma_f;
    report["optimal"] = opt.optimal;
    if (opt.offending) report["offending_vertex"] = *opt.offending;
    bool collapses = false;
    for (const auto& p : f.edge_images) collapses = collapses || p.empty();
    if (!collapses) {
        Json illegal = Json::array();
        for (const auto& t : turn_analysis(f).illegal) illegal.push_back({t.first, t.second});
        report["illegal_turns"] = illegal;
    }
    int code = 0;
    if (cfg.brute) {
        const auto b = brute_force_lipschitz(f);
        report["brute_force"] = b.value;
        report["brute_witness"] = path_to_json(b.witness);
        if (std::abs(b.value - lip.value) > cfg.tolerance) code = 1;
    }
    emit(report);
    return code;
}

int cmd_minset(const Config& cfg)
{
    const auto r = minset_check(cfg.rank, cfg.bound);
    Json report{{"rank", r.rank}, {"bound", r.bound}, {"competitors", r.competitors}, {"unit_vector", r.unit_vector},
                {"minimal", r.minimal}, {"ties", r.ties}, {"ties_isometric", r.ties_isometric}, {"passed", r.passed()}};
    if (r.worst) {
        report["worst"] = automorphism_to_json(*r.worst);
        report["worst_vector"] = r.worst_vector;
    }
    if (r.violation) report["violation"] = automorphism_to_json(*r.violation);
    emit(report);
    return r.passed() ? 0 : 1;
}

int cmd_formulas(const Config& cfg)
{
    const FactorSignature sig{cfg.n, parse_factor_list(cfg.s), cfg.c};
    const FormulaRow row = formula_row(sig);
    Json report{{"signature", signature_name(sig)}, {"k", sig.k()}, {"m", sig.m()}};
    report["vcd"] = row.vcd ? Json(*row.vcd) : Json(nullptr);
    report["dimS"] = *row.dimS;
    report["dimD"] = row.dimD ? Json(*row.dimD) : Json(nullptr);
    report["dimCV"] = row.dimCV;
    report["V"] = row.counts.V;
    report["E"] = row.counts.E;
    emit(report);
    return 0;
}

int cmd_table(const Config& cfg)
{
    const std::string csv = formula_csv(formula_table(cfg.n_max, cfg.s_max));
    if (!cfg.out.empty())
        write_file_atomic(cfg.out, csv);
    else
        std::cout << csv;
    return 0;
}

int cmd_vcd_witness(const Config& cfg)
{
    const BasisSpec basis = basis_of(cfg);
    const auto gens = vcd_generators(basis);
    const auto r = verify_abelian_witness(gens, cfg.bound);
    Json names = Json::array();
    for (const auto& g : gens) names.push_back(g.name);
    const int expected = vcd_witness_rank(basis);
    const bool count_ok = static_cast<int>(gens.size()) == expected;
    Json report{{"generators", names}, {"expected_count", expected}, {"count_matches", count_ok},
                {"all_relative", r.all_relative}, {"commutators_trivial", r.commutators_trivial},
                {"products_checked", r.products_checked}, {"inner_products", r.inner_products},
                {"unexpected_inner", r.unexpected_inner}, {"passed", r.passed() && count_ok}};
    if (!r.relation.empty()) report["relation"] = r.relation;
    emit(report);
    return r.passed() && count_ok ? 0 : 1;
}

int cmd_ball(const Config& cfg)
{
    const BasisSpec basis = basis_of(cfg);
    std::vector<Automorphism> gens;
    if (!cfg.automorphisms.empty()) {
        const Json j = read_json_file(cfg.automorphisms);
        if (!j.is_array()) throw InputError(cfg.automorphisms + ": expected an array of automorphisms");
        for (const auto& a : j) gens.push_back(automorphism_from_json(a));
    } else {
        for (const auto& g : vcd_generators(basis)) gens.push_back(g.map);
    }
    const auto ball = spine_ball(marked_rose(basis), gens, cfg.radius);
    std::map<std::string, int> by_type;
    for (const auto& t : ball.types) ++by_type[t];
    Json report{{"radius", cfg.radius}, {"vertices", ball.vertices.size()}, {"orbit", ball.orbit.size()}, {"types", by_type}};
    report["f_vector"] = ball.complex.f_vector();
    report["reduced_f_vector"] = ball.reduced_complex.empty() ? std::vector<long long>{} : ball.reduced_complex.f_vector();
    bool ok = true;
    for (const auto& v : ball.vertices) ok = ok && is_valid_agraph(v.graph) && validate_marking(v).empty();
    report["all_valid"] = ok;
    if (!cfg.out.empty()) {
        write_file_atomic(out_path(cfg, "ball_complex.json"), complex_to_json(ball.complex).dump(2) + "\n");
        write_file_atomic(out_path(cfg, "ball_hasse.dot"), hasse_dot(ball.poset, "ball"));
        Json vs = Json::array();
        for (const auto& v : ball.vertices) vs.push_back(graph_to_json(v));
        write_file_atomic(out_path(cfg, "ball_vertices.json"), vs.dump(2) + "\n");
    }
    emit(report);
    return ok ? 0 : 1;
}

int cmd_check_automorphism(const Config& cfg)
{
    const Automorphism f = automorphism_from_json(read_json_file(cfg.file));
    const auto nr = nielsen_reduce(f);
    Json report;
    report["verdict"] = nr.verdict == NielsenVerdict::basis ? "automorphism" : nr.verdict == NielsenVerdict::not_basis ? "not_basis" : "inconclusive";
    if (nr.verdict == NielsenVerdict::basis) {
        report["inverse"] = automorphism_to_json(*nr.inverse);
        const auto rel = is_relative(f);
        report["relative"] = rel.has_value();
        if (rel) {
            Json cs = Json::array();
            for (const auto& w : *rel) cs.push_back(to_string(w, f.basis()));
            report["conjugators"] = cs;
        }
        const auto inner = is_inner(f);
        report["inner"] = inner.has_value();
        if (inner) report["inner_witness"] = to_string(*inner, f.basis());
    }
    emit(report);
    return nr.verdict == NielsenVerdict::basis ? 0 : 1;
}

void add_signature(CLI::App* app, Config& cfg, bool factors_required = false)
{
    app->add_option("--n", cfg.n, "free group rank")->required();
    auto* s = app->add_option("--s", cfg.s, "factor ranks, comma separated");
    if (factors_required) s->required();
}

void add_enum(CLI::App* app, Config& cfg)
{
    app->add_option("--edge-cap", cfg.edge_cap, "override the enumeration edge cap");
    app->add_flag("--reduced", cfg.reduced, "drop graphs with separating edges");
    app->add_flag("--force", cfg.force, "ignore the size guard");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"relspine: relative spines of free groups with a free factor system"};
    app.require_subcommand(1);
    Config cfg;
    std::function<int()> run;

    auto* validate = app.add_subcommand("validate", "check an A-graph file");
    validate->add_option("file", cfg.file)->required();
    validate->add_flag("--pre", cfg.pre, "check pre-A-graph axioms instead");
    validate->callback([&] { run = [&] { return cmd_validate(cfg); }; });

    auto* enumerate = app.add_subcommand("enumerate", "enumerate A-graph types");
    add_signature(enumerate, cfg);
    add_enum(enumerate, cfg);
    enumerate->add_option("--out", cfg.out, "directory for types.json and DOT files");
    enumerate->callback([&] { run = [&] { return cmd_enumerate(cfg); }; });

    for (const bool small : {false, true}) {
        auto* sp = app.add_subcommand(small ? "smallspine" : "spine", small ? "small spine order complex" : "collapse poset order complex");
        add_signature(sp, cfg);
        add_enum(sp, cfg);
        sp->add_flag("--homology", cfg.homology, "compute integral homology");
        sp->add_option("--out", cfg.out, "directory for complex JSON and Hasse DOT");
        sp->callback([&, small] { run = [&, small] { return cmd_spine(cfg, small); }; });
    }

    auto* hom = app.add_subcommand("homology", "integral homology of a complex file or a spine");
    hom->add_option("--complex", cfg.file, "complex JSON");
    hom->add_option("--n", cfg.n);
    hom->add_option("--s", cfg.s);
    add_enum(hom, cfg);
    hom->add_flag("--rational", cfg.rational, "cross-check against ranks over the rationals");
    hom->add_option("--out", cfg.out);
    hom->callback([&] {
        run = [&] {
            if (cfg.file.empty() && cfg.n == 0) throw InputError("homology needs --complex or --n");
            return cmd_homology(cfg);
        };
    });

    auto* links = app.add_subcommand("links", "ideal-edge links B(v) and L(v)");
    links->add_option("file", cfg.file)->required();
    links->add_option("--vertex", cfg.vertex);
    links->callback([&] { run = [&] { return cmd_links(cfg); }; });

    auto* lip = app.add_subcommand("lipschitz", "Lipschitz constant of the comparison map");
    lip->add_option("--source", cfg.file)->required();
    lip->add_option("--target", cfg.target)->required();
    lip->add_flag("--brute", cfg.brute, "compare with all loops up to 2E darts");
    lip->add_flag("--no-barbells", cfg.no_barbells, "cycles and figure eights only");
    lip->add_option("--tolerance", cfg.tolerance)->check(CLI::Range(1e-15, 1e-3));
    lip->callback([&] { run = [&] { return cmd_lipschitz(cfg); }; });

    auto* minset = app.add_subcommand("minset-check", "unit rose against bounded competitors");
    minset->add_option("--rank", cfg.rank)->check(CLI::Range(1, 4));
    minset->add_option("--bound", cfg.bound)->check(CLI::Range(0, 6));
    minset->callback([&] { run = [&] { return cmd_minset(cfg); }; });

    auto* formulas = app.add_subcommand("formulas", "closed-form dimensions");
    formulas->add_option("--n", cfg.n);
    formulas->add_option("--s", cfg.s);
    formulas->add_option("--c", cfg.c, "wedge-cycle component count");
    auto* table = formulas->add_subcommand("table", "CSV over a signature grid");
    table->add_option("--n-max", cfg.n_max)->check(CLI::Range(2, 40));
    table->add_option("--s-max", cfg.s_max)->check(CLI::Range(1, 40));
    table->add_option("--out", cfg.out, "CSV file");
    table->callback([&] { run = [&] { return cmd_table(cfg); }; });
    formulas->callback([&] {
        if (!run) run = [&] {
                if (cfg.n == 0) throw InputError("formulas needs --n or the table subcommand");
                return cmd_formulas(cfg);
            };
    });

    auto* vcdw = app.add_subcommand("vcd-witness", "abelian witness subgroup checks");
    add_signature(vcdw, cfg, true);
    vcdw->add_option("--bound", cfg.bound, "exponent bound")->check(CLI::Range(0, 4));
    vcdw->callback([&] { run = [&] { return cmd_vcd_witness(cfg); }; });

    auto* ball = app.add_subcommand("ball", "marked spine ball around the identity rose");
    add_signature(ball, cfg);
    ball->add_option("--radius", cfg.radius)->check(CLI::Range(0, 6));
    ball->add_option("--automorphisms", cfg.automorphisms, "JSON array of generators");
    ball->add_option("--out", cfg.out);
    ball->callback([&] { run = [&] { return cmd_ball(cfg); }; });

    auto* check = app.add_subcommand("check-automorphism", "Nielsen, relative and inner checks");
    check->add_option("file", cfg.file)->required();
    check->callback([&] { run = [&] { return cmd_check_automorphism(cfg); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        return run ? run() : 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const VerificationError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
