#include "relspine/enumerate.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>

#include "relspine/detail/dsu.hpp"
#include "relspine/errors.hpp"
#include "relspine/parallel.hpp"

namespace relspine {

int stated_edge_bound(const BasisSpec& b)
{
    const int n = b.rank(), k = b.num_factors(), total = b.factor_total(), m = b.num_cyclic_factors();
    if (n > total) return 3 * n + 3 * k - 2 * total - 3 - m;
    return 3 * n + 2 * k - 2 * total - 2 - m;
}

int search_edge_cap(const BasisSpec& b)
{
    const int n = b.rank(), k = b.num_factors(), total = b.factor_total(), m = b.num_cyclic_factors();
    return 3 * n + 3 * k - 2 * total - 3 - m;
}

namespace {

void degree_sequences(int V, int remaining, int max_degree, std::vector<int>& seq, std::vector<std::vector<int>>& out)
{
    const int placed = static_cast<int>(seq.size());
    if (placed == V) {
        if (remaining == 0) out.push_back(seq);
        return;
    }
    const int left = V - placed;
    for (int d = std::min(max_degree, remaining - 3 * (left - 1)); d >= 3; --d) {
        seq.push_back(d);
        degree_sequences(V, remaining - d, d, seq, out);
        seq.pop_back();
    }
}

void fill_edges(std::vector<int>& rem, std::vector<std::pair<int, int>>& edges, int total, std::vector<Graph>& out)
{
    const int V = static_cast<int>(rem.size());
    if (static_cast<int>(edges.size()) == total) {
        detail::Dsu dsu(V);
        for (const auto& [a, b] : edges) dsu.unite(a, b);
        if (dsu.components() != 1) return;
        Graph g(V, {});
        for (const auto& [a, b] : edges) g.add_edge(a, b);
        out.push_back(std::move(g));
        return;
    }
    int u = 0;
    while (u < V && rem[static_cast<std::size_t>(u)] == 0) ++u;
    if (u == V) return;
    int start = u;
    if (!edges.empty() && edges.back().first == u) start = edges.back().second;
    for (int v = start; v < V; ++v) {
        if (v == u ? rem[static_cast<std::size_t>(u)] < 2 : rem[static_cast<std::size_t>(v)] < 1) continue;
        rem[static_cast<std::size_t>(u)] -= 1;
        rem[static_cast<std::size_t>(v)] -= 1;
        edges.emplace_back(u, v);
        fill_edges(rem, edges, total, out);
        edges.pop_back();
        rem[static_cast<std::size_t>(u)] += 1;
        rem[static_cast<std::size_t>(v)] += 1;
    }
}

}  // namespace

std::vector<Graph> labelled_multigraphs(int num_vertices, int num_edges)
{
    std::vector<Graph> out;
    if (num_vertices < 1 || 2 * num_edges < 3 * num_vertices) return out;
    std::vector<std::vector<int>> seqs;
    std::vector<int> seq;
    degree_sequences(num_vertices, 2 * num_edges, 2 * num_edges, seq, seqs);
    for (auto& s : seqs) {
        std::vector<std::pair<int, int>> edges;
        fill_edges(s, edges, num_edges, out);
    }
    return out;
}

std::vector<std::vector<Dart>> embedded_cycles(const Graph& g)
{
    std::vector<std::vector<Dart>> out;
    std::vector<std::uint64_t> seen;
    std::vector<Dart> path;
    std::vector<bool> on_path(static_cast<std::size_t>(g.num_vertices()), false);
    std::vector<bool> used(static_cast<std::size_t>(g.num_edges()), false);
    std::vector<std::vector<Dart>> darts(static_cast<std::size_t>(g.num_vertices()));
    for (Vertex v = 0; v < g.num_vertices(); ++v) darts[static_cast<std::size_t>(v)] = g.darts_at(v);

    for (Vertex s = 0; s < g.num_vertices(); ++s) {
        std::function<void(Vertex)> dfs = [&](Vertex at) {
            for (Dart d : darts[static_cast<std::size_t>(at)]) {
                const EdgeId e = edge_of(d);
                if (used[static_cast<std::size_t>(e)]) continue;
                const Vertex to = g.terminus(d);
                if (to == s) {
                    path.push_back(d);
                    std::uint64_t mask = 0;
                    for (Dart x : path) mask |= std::uint64_t{1} << edge_of(x);
                    if (std::find(seen.begin(), seen.end(), mask) == seen.end()) {
                        seen.push_back(mask);
                        out.push_back(path);
                    }
                    path.pop_back();
                    continue;
                }
                if (to < s || on_path[static_cast<std::size_t>(to)]) continue;
                used[static_cast<std::size_t>(e)] = true;
                on_path[static_cast<std::size_t>(to)] = true;
                path.push_back(d);
                dfs(to);
                path.pop_back();
                on_path[static_cast<std::size_t>(to)] = false;
                used[static_cast<std::size_t>(e)] = false;
            }
        };
        on_path[static_cast<std::size_t>(s)] = true;
        dfs(s);
        on_path[static_cast<std::size_t>(s)] = false;
    }
    return out;
}

namespace {

struct WedgeCandidate {
    Wedge wedge;
    std::uint64_t edges = 0;
    std::uint64_t vertices = 0;
};

std::vector<Dart> rotate_to(const Graph& g, std::vector<Dart> cycle, Vertex base)
{
    auto it = std::find_if(cycle.begin(), cycle.end(), [&](Dart d) { return g.origin(d) == base; });
    std::rotate(cycle.begin(), it, cycle.end());
    return cycle;
}

std::vector<WedgeCandidate> wedge_candidates(const Graph& g, const std::vector<std::vector<Dart>>& cycles, int s)
{
    std::vector<std::uint64_t> emask(cycles.size(), 0), vmask(cycles.size(), 0);
    for (std::size_t c = 0; c < cycles.size(); ++c)
        for (Dart d : cycles[c]) {
            emask[c] |= std::uint64_t{1} << edge_of(d);
            vmask[c] |= std::uint64_t{1} << g.origin(d);
        }
    std::vector<WedgeCandidate> out;
    if (s == 1) {
        for (std::size_t c = 0; c < cycles.size(); ++c) {
            WedgeCandidate w;
            w.wedge.base = g.origin(cycles[c].front());
            w.wedge.circles = {cycles[c]};
            w.edges = emask[c];
            w.vertices = vmask[c];
            out.push_back(std::move(w));
        }
        return out;
    }
    for (Vertex b = 0; b < g.num_vertices(); ++b) {
        const std::uint64_t bit = std::uint64_t{1} << b;
        std::vector<std::size_t> through;
        for (std::size_t c = 0; c < cycles.size(); ++c)
            if (vmask[c] & bit) through.push_back(c);
        std::vector<std::size_t> pick;
        std::function<void(std::size_t, std::uint64_t, std::uint64_t)> rec = [&](std::size_t from, std::uint64_t es, std::uint64_t vs) {
            if (static_cast<int>(pick.size()) == s) {
                WedgeCandidate w;
                w.wedge.base = b;
                for (std::size_t c : pick) w.wedge.circles.push_back(rotate_to(g, cycles[c], b));
                w.edges = es;
                w.vertices = vs;
                out.push_back(std::move(w));
                return;
            }
            for (std::size_t t = from; t < through.size(); ++t) {
                const std::size_t c = through[t];
                if ((emask[c] & es) != 0 || (vmask[c] & vs) != bit) continue;
                pick.push_back(c);
                rec(t + 1, es | emask[c], vs | vmask[c]);
                pick.pop_back();
            }
        };
        rec(0, 0, bit);
    }
    return out;
}

}  // namespace

std::vector<AGraph> wedge_systems(const Graph& g, const BasisSpec& basis)
{
    if (g.num_edges() > 64 || g.num_vertices() > 64) throw InputError("graph too large for wedge enumeration");
    const auto cycles = embedded_cycles(g);
    std::map<int, std::vector<WedgeCandidate>> by_rank;
    for (int s : basis.factor_ranks())
        if (!by_rank.count(s)) by_rank[s] = wedge_candidates(g, cycles, s);

    std::vector<AGraph> out;
    const int k = basis.num_factors();
    std::vector<const WedgeCandidate*> chosen;
    std::function<void(int)> rec = [&](int j) {
        if (j == k) {
            AGraph a;
            a.graph = g;
            a.basis = basis;
            for (const auto* w : chosen) a.wedges.push_back(w->wedge);
            if (validate_agraph(a).empty()) out.push_back(std::move(a));
            return;
        }
        for (const auto& w : by_rank.at(basis.factor_rank(j))) {
            bool ok = true;
            for (const auto* prev : chosen)
                if ((prev->edges & w.edges) != 0 || std::popcount(prev->vertices & w.vertices) > 1) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(&w);
            rec(j + 1);
            chosen.pop_back();
        }
    };
    rec(0);
    return out;
}

EnumerationResult enumerate_agraph_types(const BasisSpec& basis, const EnumerationOptions& options)
{
    if (basis.rank() < 1) throw InputError("rank must be positive");
    const int stated = stated_edge_bound(basis);
    if (!options.force && stated > options.guard)
        throw InputError("edge bound " + std::to_string(stated) + " exceeds the enumeration guard of " +
                         std::to_string(options.guard) + " edges; pass force to run anyway");
    EnumerationResult result;
    result.edge_cap = options.edge_cap.value_or(search_edge_cap(basis));
    const int n = basis.rank();

    std::vector<Graph> labelled;
    if (n == 1) {
        Graph loop(1, {});
        loop.add_edge(0, 0);
        labelled.push_back(std::move(loop));
    }
    for (int E = n; E <= result.edge_cap; ++E) {
        auto batch = labelled_multigraphs(E - n + 1, E);
        labelled.insert(labelled.end(), std::make_move_iterator(batch.begin()), std::make_move_iterator(batch.end()));
    }
    result.labelled_multigraphs = static_cast<long long>(labelled.size());

    std::vector<TypeKey> bare(labelled.size());
    parallel_for(
        labelled.size(),
        [&](std::size_t i) {
            const std::vector<std::uint32_t> zero(static_cast<std::size_t>(labelled[i].num_edges()), 0);
            bare[i] = detail::canonical_key(labelled[i], zero);
        },
        options.parallel);
    std::vector<std::size_t> reps;
    {
        std::map<TypeKey, std::size_t> first;
        for (std::size_t i = 0; i < labelled.size(); ++i)
            if (first.emplace(bare[i], i).second) reps.push_back(i);
    }
    result.multigraph_types = static_cast<long long>(reps.size());

    std::vector<std::vector<std::pair<TypeKey, AGraph>>> found(reps.size());
    parallel_for(
        reps.size(),
        [&](std::size_t r) {
            const Graph& g = labelled[reps[r]];
            if (options.reduced && !g.separating_edges().empty()) return;
            std::map<TypeKey, AGraph> local;
            for (auto& a : wedge_systems(g, basis)) {
                TypeKey key = canonical_form(a);
                local.emplace(std::move(key), std::move(a));
            }
            for (auto& [key, a] : local) found[r].emplace_back(key, std::move(a));
        },
        options.parallel);

    std::map<std::pair<int, TypeKey>, AGraph> merged;
    for (auto& bucket : found)
        for (auto& [key, a] : bucket) merged.emplace(std::make_pair(a.graph.num_edges(), key), std::move(a));
    for (auto& [slot, a] : merged) {
        result.keys.push_back(slot.second);
        result.types.push_back(std::move(a));
    }
    return result;
}

}  // namespace relspine
