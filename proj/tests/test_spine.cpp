#include <bit>
#include <map>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "relspine/formulas.hpp"
#include "relspine/spine.hpp"

using namespace relspine;

TEST_CASE("poset dimensions")
{
    struct Row {
        int n;
        std::vector<int> s;
        std::size_t types;
        int dim_full;
        int dim_reduced;
        int dim_small;
    };
    // dim_small = -1 when the small subposet is empty
    for (const Row& r : {Row{2, {1}, 3, 1, 1, 1}, Row{3, {1}, 30, 3, 3, 3}, Row{3, {2}, 7, 2, 2, 2}, Row{4, {2, 2}, 8, 3, 2, 2}, Row{3, {1, 1}, 34, 3, 3, 2}}) {
        BasisSpec b(r.n, r.s);
        auto p = collapse_poset(b);
        CHECK(p.types.size() == r.types);
        CHECK(order_complex(p.poset).dimension() == r.dim_full);
        EnumerationOptions opt;
        opt.reduced = true;
        CHECK(order_complex(collapse_poset(b, opt).poset).dimension() == r.dim_reduced);
        auto sm = small_spine(p);
        CHECK((sm.types.empty() ? -1 : order_complex(sm.poset).dimension()) == r.dim_small);
        CHECK(is_acyclic(homology(order_complex(p.poset))));
        FactorSignature sig{r.n, r.s, {}};
        CHECK(r.dim_reduced == dim_relative_spine(sig));
    }
}

TEST_CASE("serial and parallel posets agree")
{
    EnumerationOptions opt;
    opt.parallel = false;
    auto a = collapse_poset(BasisSpec(3, {1}), opt);
    auto b = collapse_poset(BasisSpec(3, {1}));
    CHECK(a.poset.elements() == b.poset.elements());
    CHECK(a.poset.covers() == b.poset.covers());
}

TEST_CASE("the poset order is forest collapse")
{
    auto p = collapse_poset(BasisSpec(3, {2}));
    for (int y = 0; y < p.poset.size(); ++y) {
        std::set<std::string> below;
        for (const auto& f : collapsible_forests(p.types[static_cast<std::size_t>(y)])) below.insert(canonical_form(collapse_forest(p.types[static_cast<std::size_t>(y)], f).graph));
        for (int x = 0; x < p.poset.size(); ++x)
            if (x != y) CHECK(p.poset.less(x, y) == (below.count(p.poset.elements()[static_cast<std::size_t>(x)]) == 1));
    }
}

TEST_CASE("vertex links in two or more wedges are collapsible")
{
    bool saw_point = false;
    for (auto [n, s] : {std::pair{4, std::vector<int>{2, 2}}, std::pair{3, std::vector<int>{1, 1}}}) {
        auto res = enumerate_agraph_types(BasisSpec(n, s));
        for (const auto& t : res.types) {
            auto mask = t.vertex_wedge_mask();
            for (Vertex v = 0; v < t.graph.num_vertices(); ++v) {
                if (std::popcount(mask[static_cast<std::size_t>(v)]) < 2) continue;
                auto lc = link_complexes(t, v);
                REQUIRE_FALSE(lc.L.empty());
                CHECK(collapse_greedy(lc.L).collapsible);
                if (t.graph.valence(v) == 4) {
                    CHECK(lc.L.num_vertices() == 1);
                    saw_point = true;
                }
            }
        }
    }
    CHECK(saw_point);
}

TEST_CASE("stars of roses")
{
    auto s21 = star_of_rose(rose(BasisSpec(2, {1})));
    CHECK(s21.legal.size() == 3);
    CHECK(s21.families.size() == 3);
    CHECK(std::set<TypeKey>(s21.blowups.begin(), s21.blowups.end()).size() == 2);
    CHECK(s21.max_family == 1);
    auto s422 = star_of_rose(rose(BasisSpec(4, {2, 2})));
    CHECK(s422.legal.size() == 9);
    CHECK(s422.max_family == 3);
    CHECK(star_of_rose(rose(BasisSpec(3, {1}))).max_family == 3);
}

TEST_CASE("pre-A-graph star contains the shared-path graph")
{
    BasisSpec b(4, {2, 1});
    auto st = star_of_rose(rose(b), true);
    std::set<TypeKey> types(st.blowups.begin(), st.blowups.end());
    CHECK(types.count(canonical_form(fixtures::contra1())) == 1);
    CHECK(types.size() == 224);
}

TEST_CASE("retraction harness detects a non-monotone map")
{
    Poset p({"a", "b", "c"}, {{0, 1}, {1, 2}});
    auto ok = poset_retract(p, {0, 0, 2});
    CHECK(ok.passed());
    auto bad = poset_retract(p, {0, 1, 0});
    CHECK(bad.below);
    CHECK_FALSE(bad.monotone);
    auto up = poset_retract(p, {1, 1, 2});
    CHECK_FALSE(up.below);
}
