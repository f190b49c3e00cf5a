#pragma once

#include <random>
#include <vector>

#include "relspine/free_group.hpp"
#include "relspine/enumerate.hpp"
#include "relspine/graph.hpp"
#include "relspine/metric.hpp"

namespace fixtures {

using namespace relspine;

// Pre-A-graph for n = 4, A1 = <y1_1, y2_1>, A2 = <y1_2>. The two wedge
// cycles share the path e1 e2 (edges 0 and 1) from p through q to r.
inline AGraph contra1()
{
    AGraph g;
    g.basis = BasisSpec(4, {2, 1});
    g.graph = Graph(3, {});
    g.graph.add_edge(0, 1);  // e1
    g.graph.add_edge(1, 2);  // e2
    g.graph.add_edge(2, 0);  // a
    g.graph.add_edge(0, 0);  // b
    g.graph.add_edge(2, 0);  // c
    g.graph.add_edge(1, 1);  // free loop
    g.wedges = {Wedge{0, {{0, 2, 4}, {6}}}, Wedge{0, {{0, 2, 8}}}};
    return g;
}

inline Word random_word(std::mt19937_64& rng, int rank, int max_len)
{
    std::uniform_int_distribution<int> len(0, max_len), gen(0, rank - 1), sign(0, 1);
    std::vector<Letter> raw;
    for (int i = 0, l = len(rng); i < l; ++i) raw.push_back(letter_of(gen(rng), sign(rng) == 1));
    return Word(raw);
}

// Random comparison maps between metric graphs of rank 2 or 3 with at most
// six edges. Markings are standard markings at random base vertices, the
// target twisted by a short product of Nielsen moves.
class MetricInstances {
public:
    explicit MetricInstances(std::uint64_t seed) : rng_(seed)
    {
        for (int n : {2, 3}) {
            for (const auto& t : enumerate_agraph_types(BasisSpec(n, {})).types) pool_[n].push_back(t.graph);
            twists_[n] = nielsen_ball(n, 3);
        }
    }

    GraphMap next()
    {
        const int n = 2 + static_cast<int>(rng_() % 2);
        const auto& pool = pool_[n];
        const Graph& a = pool[rng_() % pool.size()];
        const Graph& b = pool[rng_() % pool.size()];
        MetricGraph src{standard_marking(a, static_cast<Vertex>(rng_() % static_cast<std::uint64_t>(a.num_vertices()))), lengths(a)};
        MetricGraph tgt{standard_marking(b, static_cast<Vertex>(rng_() % static_cast<std::uint64_t>(b.num_vertices()))), lengths(b)};
        tgt.marked = act(tgt.marked, twists_[n][rng_() % twists_[n].size()]);
        return comparison_map(src, tgt);
    }

private:
    std::vector<double> lengths(const Graph& g)
    {
        std::uniform_real_distribution<double> u(0.05, 1.0);
        std::vector<double> out;
        for (int e = 0; e < g.num_edges(); ++e) out.push_back(u(rng_));
        return out;
    }

    std::mt19937_64 rng_;
    std::vector<Graph> pool_[4];
    std::vector<Automorphism> twists_[4];
};

}  // namespace fixtures
