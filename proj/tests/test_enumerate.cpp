#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "relspine/enumerate.hpp"
#include "relspine/errors.hpp"

using namespace relspine;

namespace {

// Isomorphism classes of connected multigraphs of rank n with every valence
// at least 3, by brute force over edge multisets and vertex permutations.
int oracle_graph_types(int n)
{
    int total = 0;
    for (int V = 1; V <= 2 * n - 2; ++V) {
        const int E = V + n - 1;
        std::vector<std::pair<int, int>> slots;
        for (int a = 0; a < V; ++a)
            for (int b = a; b < V; ++b) slots.emplace_back(a, b);
        std::set<std::vector<std::pair<int, int>>> classes;
        std::vector<int> pick;
        std::function<void(int)> rec = [&](int from) {
            if (static_cast<int>(pick.size()) == E) {
                std::vector<int> deg(static_cast<std::size_t>(V), 0);
                std::vector<int> parent(static_cast<std::size_t>(V));
                std::iota(parent.begin(), parent.end(), 0);
                std::function<int(int)> find = [&](int x) { return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]); };
                for (int i : pick) {
                    auto [a, b] = slots[static_cast<std::size_t>(i)];
                    ++deg[static_cast<std::size_t>(a)];
                    ++deg[static_cast<std::size_t>(b)];
                    parent[static_cast<std::size_t>(find(a))] = find(b);
                }
                for (int v = 0; v < V; ++v)
                    if (deg[static_cast<std::size_t>(v)] < 3 || find(v) != find(0)) return;
                std::vector<int> perm(static_cast<std::size_t>(V));
                std::iota(perm.begin(), perm.end(), 0);
                std::vector<std::pair<int, int>> best;
                do {
                    std::vector<std::pair<int, int>> es;
                    for (int i : pick) {
                        auto [a, b] = slots[static_cast<std::size_t>(i)];
                        int x = perm[static_cast<std::size_t>(a)], y = perm[static_cast<std::size_t>(b)];
                        es.emplace_back(std::min(x, y), std::max(x, y));
                    }
                    std::sort(es.begin(), es.end());
                    if (best.empty() || es < best) best = es;
                } while (std::next_permutation(perm.begin(), perm.end()));
                classes.insert(best);
                return;
            }
            for (int i = from; i < static_cast<int>(slots.size()); ++i) {
                pick.push_back(i);
                rec(i);
                pick.pop_back();
            }
        };
        rec(0);
        total += static_cast<int>(classes.size());
    }
    return total;
}

}  // namespace

TEST_CASE("plain graph types match the brute force oracle")
{
    for (int n = 2; n <= 3; ++n) {
        auto res = enumerate_agraph_types(BasisSpec(n, {}));
        CHECK(static_cast<int>(res.types.size()) == oracle_graph_types(n));
    }
    CHECK(enumerate_agraph_types(BasisSpec(2, {})).types.size() == 3);
    CHECK(enumerate_agraph_types(BasisSpec(3, {})).types.size() == 15);
}

TEST_CASE("frozen type counts")
{
    CHECK(enumerate_agraph_types(BasisSpec(2, {1})).types.size() == 3);
}

TEST_CASE("every enumerated type is valid and keys are distinct")
{
    for (auto [n, s] : {std::pair{2, std::vector<int>{1}}, std::pair{3, std::vector<int>{1}}, std::pair{3, std::vector<int>{2}}, std::pair{4, std::vector<int>{2, 2}}}) {
        BasisSpec b(n, s);
        auto res = enumerate_agraph_types(b);
        std::set<TypeKey> keys;
        for (std::size_t i = 0; i < res.types.size(); ++i) {
            CHECK(validate_agraph(res.types[i]).empty());
            CHECK(canonical_form(res.types[i]) == res.keys[i]);
            CHECK(res.types[i].graph.num_edges() <= res.edge_cap);
            keys.insert(res.keys[i]);
        }
        CHECK(keys.size() == res.keys.size());
    }
}

TEST_CASE("serial and parallel enumeration agree")
{
    for (auto [n, s] : {std::pair{3, std::vector<int>{}}, std::pair{3, std::vector<int>{2}}, std::pair{4, std::vector<int>{2, 2}}}) {
        EnumerationOptions serial;
        serial.parallel = false;
        auto a = enumerate_agraph_types(BasisSpec(n, s), serial);
        auto b = enumerate_agraph_types(BasisSpec(n, s));
        CHECK(a.keys == b.keys);
    }
}

TEST_CASE("reduced enumeration drops separating edges")
{
    EnumerationOptions opt;
    opt.reduced = true;
    auto res = enumerate_agraph_types(BasisSpec(4, {2, 2}), opt);
    for (const auto& t : res.types) CHECK(t.graph.separating_edges().empty());
}

TEST_CASE("the size guard refuses large signatures")
{
    CHECK_THROWS_AS(enumerate_agraph_types(BasisSpec(6, {})), InputError);
}

TEST_CASE("edge bounds")
{
    CHECK(stated_edge_bound(BasisSpec(3, {})) == 6);
    CHECK(stated_edge_bound(BasisSpec(4, {2, 2})) == search_edge_cap(BasisSpec(4, {2, 2})) - 1);
}

TEST_CASE("embedded cycles of the theta graph")
{
    Graph theta(2, {});
    for (int i = 0; i < 3; ++i) theta.add_edge(0, 1);
    CHECK(embedded_cycles(theta).size() == 3);
    Graph r(1, {});
    r.add_edge(0, 0);
    r.add_edge(0, 0);
    CHECK(embedded_cycles(r).size() == 2);
}
