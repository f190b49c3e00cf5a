// Runs the ten acceptance criteria and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria (capped at 1).

#include <bit>
#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "relspine/formulas.hpp"
#include "relspine/marked.hpp"
#include "relspine/metric.hpp"
#include "relspine/spine.hpp"

using namespace relspine;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Sig = std::pair<int, std::vector<int>>;
const std::vector<Sig> enumeration_sigs = {{2, {1}}, {3, {1}}, {3, {2}}, {4, {2, 2}}};

std::string name(const Sig& s) { return signature_name({s.first, s.second, {}}); }

Outcome formula_table_check()
{
    Outcome o;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) {
            o.pass = false;
            o.detail += what + " wrong; ";
        }
    };
    expect(vcd({2, {1}, {}}) == 1, "vcd(2,(1))");
    for (int n = 3; n <= 6; ++n) expect(vcd({n, std::vector<int>(static_cast<std::size_t>(n), 1), {}}) == n - 2, "vcd(n,1^n)");
    expect(vcd({4, {2, 2}, {}}) == 2, "vcd(4,(2,2))");
    expect(dim_small_spine({4, {2, 2}, {}}) == 2, "dimD(4,(2,2))");
    expect(dim_relative_spine({5, {2, 2}, {}}) == 5, "dimS(5,(2,2))");
    expect(dim_cv({5, {2, 2}, {}}) == 5, "dimCV(5,(2,2))");
    for (int n = 2; n <= 5; ++n) {
        expect(dim_relative_spine({n, {}, {}}) == 2 * n - 3, "dimS k=0");
        expect(dim_cv({n, {}, {}}) == 3 * n - 4, "dimCV k=0");
    }
    if (o.pass) o.detail = "all listed values exact";
    return o;
}

Outcome enumeration_dims()
{
    Outcome o;
    std::ostringstream d;
    for (const auto& s : enumeration_sigs) {
        BasisSpec b(s.first, s.second);
        FactorSignature sig{s.first, s.second, {}};
        auto p = collapse_poset(b);
        const int full = order_complex(p.poset).dimension();
        auto sm = small_spine(p);
        const int small = sm.types.empty() ? -1 : order_complex(sm.poset).dimension();
        EnumerationOptions opt;
        opt.reduced = true;
        const int reduced = order_complex(collapse_poset(b, opt).poset).dimension();
        const bool ok = full == dim_relative_spine(sig) && small == dim_small_spine(sig);
        o.pass = o.pass && ok;
        d << name(s) << " S " << full << "/" << dim_relative_spine(sig) << " D " << small << "/" << dim_small_spine(sig);
        if (!ok) d << " (without separating edges S " << reduced << ")";
        d << "; ";
    }
    o.detail = d.str();
    return o;
}

Outcome legality()
{
    Outcome o;
    std::ostringstream d;
    for (const auto& s : enumeration_sigs) {
        int total = 0, remark = 0, coherent = 0;
        for (const auto& t : enumerate_agraph_types(BasisSpec(s.first, s.second)).types)
            for (Vertex v = 0; v < t.graph.num_vertices(); ++v)
                for (const auto& e : ideal_edges_at(t, v)) {
                    ++total;
                    const bool legal = is_legal(t, e);
                    remark += remark_legal(t, e) == legal;
                    coherent += coherent_legal(t, e) == legal;
                }
        o.pass = o.pass && remark == total;
        d << name(s) << " " << remark << "/" << total << " (coherent " << coherent << "/" << total << "); ";
    }
    o.detail = d.str();
    return o;
}

Outcome links()
{
    Outcome o;
    int checked = 0, points = 0;
    std::vector<Sig> sigs = enumeration_sigs;
    sigs.push_back({3, {1, 1}});
    for (const auto& s : sigs)
        for (const auto& t : enumerate_agraph_types(BasisSpec(s.first, s.second)).types) {
            auto mask = t.vertex_wedge_mask();
            for (Vertex v = 0; v < t.graph.num_vertices(); ++v) {
                if (std::popcount(mask[static_cast<std::size_t>(v)]) < 2) continue;
                ++checked;
                auto lc = link_complexes(t, v);
                if (lc.L.empty() || !collapse_greedy(lc.L).collapsible) o.pass = false;
                if (t.graph.valence(v) == 4) {
                    ++points;
                    if (lc.L.num_vertices() != 1) o.pass = false;
                }
            }
        }
    if (points == 0) o.pass = false;
    o.detail = std::to_string(checked) + " multi-wedge vertices collapsible, " + std::to_string(points) + " valence-4 links single points";
    return o;
}

Outcome lipschitz_candidates()
{
    Outcome o;
    fixtures::MetricInstances gen(7);
    const int N = 200;
    int plain_miss = 0, barbell_miss = 0;
    double worst = 0;
    for (int i = 0; i < N; ++i) {
        auto f = gen.next();
        const double brute = brute_force_lipschitz(f).value;
        const double plain = lipschitz(f, Candidates::cycles_and_figure_eights).value;
        const double bar = lipschitz(f, Candidates::with_barbells).value;
        if (std::abs(plain - brute) > stretch_tolerance) ++plain_miss;
        if (std::abs(bar - brute) > stretch_tolerance) ++barbell_miss;
        worst = std::max(worst, brute - plain);
    }
    o.pass = plain_miss == 0;
    std::ostringstream d;
    d << N << " instances, cycles+figure-eights miss " << plain_miss << " (max gap " << worst << "), with barbells miss " << barbell_miss;
    o.detail = d.str();
    return o;
}

Outcome minset()
{
    auto r = minset_check(2, 4);
    Outcome o;
    o.pass = r.passed();
    std::ostringstream d;
    d << r.competitors << " competitors, minimal " << r.minimal << ", " << r.ties << " ties all isometric " << r.ties_isometric;
    o.detail = d.str();
    return o;
}

Outcome retraction()
{
    Outcome o;
    const AGraph c1 = fixtures::contra1();
    if (!validate_pre_agraph(c1).empty() || validate_agraph(c1).empty()) return {false, "fixture is not a strict pre-A-graph"};
    const AGraph r = rose(c1.basis);
    auto st = star_of_rose(r, true);
    std::map<TypeKey, AGraph> types{{canonical_form(r), r}};
    for (const auto& fam : st.families) {
        std::vector<IdealEdge> edges;
        for (int i : fam) edges.push_back(st.legal[static_cast<std::size_t>(i)]);
        auto b = blow_up(r, 0, edges).graph;
        types.emplace(canonical_form(b), b);
    }
    if (!types.count(canonical_form(c1))) return {false, "fixture missing from the family"};
    std::vector<AGraph> list;
    for (auto& [k, g] : types) list.push_back(g);
    auto p = collapse_poset(list, true);
    std::vector<int> f;
    int moved = 0;
    for (std::size_t i = 0; i < p.types.size(); ++i) {
        const auto key = canonical_form(collapse_wedge_intersections(p.types[i]).graph);
        f.push_back(p.poset.index_of(key));
        moved += key != p.poset.elements()[i];
    }
    auto rep = poset_retract(p.poset, f);
    o.pass = rep.passed();
    std::ostringstream d;
    d << p.poset.size() << " types, " << moved << " moved, monotone " << rep.monotone << ", below " << rep.below << ", betti";
    for (auto b : rep.source.betti) d << " " << b;
    d << " ->";
    for (auto b : rep.target.betti) d << " " << b;
    o.detail = d.str();
    return o;
}

Outcome witness()
{
    Outcome o;
    std::ostringstream d;
    for (int n : {5, 4}) {
        BasisSpec b(n, {2, 2});
        auto gens = vcd_generators(b);
        auto rep = verify_abelian_witness(gens, 2);
        const bool ok = rep.commutators_trivial && rep.all_relative && rep.inner_products.empty() &&
                        static_cast<int>(gens.size()) == vcd({n, {2, 2}, {}});
        o.pass = o.pass && ok;
        d << "(" << n << ",(2,2)) " << gens.size() << " generators, " << rep.products_checked << " products, " << rep.inner_products.size() << " inner; ";
    }
    o.detail = d.str();
    return o;
}

// 1-skeleton with vertex classes as loop counts, keyed canonically.
TypeKey skeleton_key(int n, const std::vector<std::pair<int, int>>& edges, const std::vector<int>& cls)
{
    Graph g(n, {});
    std::vector<std::uint32_t> labels;
    for (auto [a, b] : edges) {
        g.add_edge(a, b);
        labels.push_back(0);
    }
    for (int v = 0; v < n; ++v)
        for (int i = 0; i <= cls[static_cast<std::size_t>(v)]; ++i) {
            g.add_edge(v, v);
            labels.push_back(1);
        }
    return detail::canonical_key(g, labels);
}

Outcome dihedral_ball()
{
    BasisSpec b(2, {1});
    std::vector<Automorphism> gens{Automorphism(b, {Word{1}, Word{1, 2}}), Automorphism(b, {Word{1}, Word{-2}})};
    auto ball = spine_ball(marked_rose(b), gens, 2);
    // classes: 0 rose, 1 theta, 2 graph with a separating edge
    std::vector<int> cls;
    for (const auto& v : ball.vertices) {
        const Graph& g = v.graph.graph;
        cls.push_back(g.num_vertices() == 1 ? 0 : g.separating_edges().empty() ? 1 : 2);
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : ball.complex.faces(1)) edges.emplace_back(e[0], e[1]);
    // Expected: theta rose theta ... theta path of 11, a dumbbell hanging off each rose.
    std::vector<int> ecls;
    std::vector<std::pair<int, int>> eedges;
    for (int i = 0; i < 11; ++i) ecls.push_back(i % 2 == 0 ? 1 : 0);
    for (int i = 0; i + 1 < 11; ++i) eedges.emplace_back(i, i + 1);
    for (int i = 1; i < 11; i += 2) {
        eedges.emplace_back(i, static_cast<int>(ecls.size()));
        ecls.push_back(2);
    }
    const bool iso = ball.complex.dimension() == 1 && skeleton_key(static_cast<int>(cls.size()), edges, cls) == skeleton_key(static_cast<int>(ecls.size()), eedges, ecls);
    // Reduced complex: connected, acyclic, every degree at most 2.
    const auto& red = ball.reduced_complex;
    std::vector<int> deg(static_cast<std::size_t>(red.num_vertices()), 0);
    for (const auto& e : red.faces(1)) {
        ++deg[static_cast<std::size_t>(e[0])];
        ++deg[static_cast<std::size_t>(e[1])];
    }
    const bool path = red.dimension() == 1 && is_acyclic(homology(red)) && *std::max_element(deg.begin(), deg.end()) <= 2;
    Outcome o{iso && path, {}};
    std::ostringstream d;
    d << ball.vertices.size() << " vertices, " << ball.orbit.size() << " roses, pattern " << (iso ? "matches" : "differs") << ", reduced " << red.num_vertices() << "-vertex " << (path ? "path" : "non-path");
    o.detail = d.str();
    return o;
}

Outcome homology_oracle()
{
    std::mt19937_64 rng(2024);
    int agree = 0;
    const int N = 50;
    for (int t = 0; t < N; ++t) {
        const int n = 4 + static_cast<int>(rng() % 9);
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
        std::vector<Face> faces;
        for (int i = 0, c = 1 + static_cast<int>(rng() % 14); i < c; ++i) {
            std::vector<int> v(static_cast<std::size_t>(n));
            std::iota(v.begin(), v.end(), 0);
            std::shuffle(v.begin(), v.end(), rng);
            Face f(v.begin(), v.begin() + 1 + static_cast<int>(rng() % std::min(4, n)));
            std::sort(f.begin(), f.end());
            faces.push_back(f);
        }
        SimplicialComplex c(names, faces);
        agree += homology(c).betti == rational_betti(c);
    }
    return {agree == N, std::to_string(agree) + "/" + std::to_string(N) + " complexes agree"};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, Outcome (*)()>> criteria = {
        {"formula table", formula_table_check},
        {"enumeration dimensions", enumeration_dims},
        {"remark legality", legality},
        {"vertex links", links},
        {"lipschitz candidates", lipschitz_candidates},
        {"rose minimality", minset},
        {"retraction", retraction},
        {"vcd witness", witness},
        {"dihedral ball", dihedral_ball},
        {"homology oracle", homology_oracle},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.detail << " [" << sec << "s]" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
