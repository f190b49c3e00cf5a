#include "relspine/graph.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <tuple>
#include <bit>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "relspine/errors.hpp"
#include "relspine/detail/dsu.hpp"

namespace relspine {

Graph::Graph(int num_vertices, std::vector<Vertex> origin) : num_vertices_(num_vertices), origin_(std::move(origin))
{
    if (num_vertices_ < 0) throw InputError("negative vertex count");
    if (origin_.size() % 2 != 0) throw InputError("odd number of darts");
    for (Vertex v : origin_)
        if (v < 0 || v >= num_vertices_) throw InputError("dart attached to unknown vertex " + std::to_string(v));
}

EdgeId Graph::add_edge(Vertex u, Vertex v)
{
    if (u < 0 || v < 0 || u >= num_vertices_ || v >= num_vertices_) throw InputError("edge endpoint out of range");
    origin_.push_back(u);
    origin_.push_back(v);
    return num_edges() - 1;
}

std::vector<Dart> Graph::darts_at(Vertex v) const
{
    std::vector<Dart> out;
    for (Dart d = 0; d < num_darts(); ++d)
        if (origin_[static_cast<std::size_t>(d)] == v) out.push_back(d);
    return out;
}

int Graph::valence(Vertex v) const
{
    return static_cast<int>(std::count(origin_.begin(), origin_.end(), v));
}

bool Graph::connected() const
{
    if (num_vertices_ == 0) return false;
    detail::Dsu dsu(num_vertices_);
    for (EdgeId e = 0; e < num_edges(); ++e) dsu.unite(origin(2 * e), origin(2 * e + 1));
    return dsu.components() == 1;
}

int Graph::rank() const
{
    if (!connected()) throw InputError("rank of a disconnected graph");
    return num_edges() - num_vertices_ + 1;
}

std::vector<EdgeId> Graph::separating_edges() const
{
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < num_edges(); ++e) {
        if (is_loop(e)) continue;
        detail::Dsu dsu(num_vertices_);
        for (EdgeId f = 0; f < num_edges(); ++f)
            if (f != e) dsu.unite(origin(2 * f), origin(2 * f + 1));
        if (dsu.find(origin(2 * e)) != dsu.find(origin(2 * e + 1))) out.push_back(e);
    }
    return out;
}

int rank(const Graph& g) { return g.rank(); }

bool is_closed_path(const Graph& g, const std::vector<Dart>& path)
{
    if (path.empty()) return false;
    for (Dart d : path)
        if (d < 0 || d >= g.num_darts()) return false;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const Dart next = path[(i + 1) % path.size()];
        if (g.terminus(path[i]) != g.origin(next)) return false;
    }
    return true;
}

std::vector<std::uint32_t> AGraph::edge_wedge_mask() const
{
    std::vector<std::uint32_t> mask(static_cast<std::size_t>(graph.num_edges()), 0);
    for (std::size_t j = 0; j < wedges.size(); ++j)
        for (const auto& c : wedges[j].circles)
            for (Dart d : c)
                if (d >= 0 && d < graph.num_darts()) mask[static_cast<std::size_t>(edge_of(d))] |= 1u << j;
    return mask;
}

std::vector<std::uint32_t> AGraph::vertex_wedge_mask() const
{
    std::vector<std::uint32_t> mask(static_cast<std::size_t>(graph.num_vertices()), 0);
    for (std::size_t j = 0; j < wedges.size(); ++j) {
        if (wedges[j].base >= 0 && wedges[j].base < graph.num_vertices())
            mask[static_cast<std::size_t>(wedges[j].base)] |= 1u << j;
        for (const auto& c : wedges[j].circles)
            for (Dart d : c)
                if (d >= 0 && d < graph.num_darts()) mask[static_cast<std::size_t>(graph.origin(d))] |= 1u << j;
    }
    return mask;
}

std::string to_string(ViolationKind kind)
{
    switch (kind) {
    case ViolationKind::malformed: return "malformed";
    case ViolationKind::disconnected: return "disconnected";
    case ViolationKind::wrong_rank: return "wrong_rank";
    case ViolationKind::low_valence: return "low_valence";
    case ViolationKind::wedge_shape: return "wedge_shape";
    case ViolationKind::circle_not_embedded: return "circle_not_embedded";
    case ViolationKind::wedge_circles_overlap: return "wedge_circles_overlap";
    case ViolationKind::wedges_share_edge: return "wedges_share_edge";
    case ViolationKind::wedges_meet_twice: return "wedges_meet_twice";
    case ViolationKind::intersection_not_tree: return "intersection_not_tree";
    case ViolationKind::intersections_not_forest: return "intersections_not_forest";
    case ViolationKind::dual_graph_cycle: return "dual_graph_cycle";
    case ViolationKind::collapsed_rank: return "collapsed_rank";
    }
    return "unknown";
}

namespace {

struct WedgeFootprint {
    std::set<Vertex> vertices;
    std::set<EdgeId> edges;
};

std::vector<WedgeFootprint> footprints(const AGraph& g)
{
    std::vector<WedgeFootprint> out(g.wedges.size());
    for (std::size_t j = 0; j < g.wedges.size(); ++j) {
        out[j].vertices.insert(g.wedges[j].base);
        for (const auto& c : g.wedges[j].circles)
            for (Dart d : c) {
                out[j].vertices.insert(g.graph.origin(d));
                out[j].edges.insert(edge_of(d));
            }
    }
    return out;
}

std::string wedge_pair(std::size_t a, std::size_t b)
{
    return "wedges " + std::to_string(a + 1) + " and " + std::to_string(b + 1);
}

template <class Set>
std::vector<typename Set::value_type> intersect(const Set& a, const Set& b)
{
    std::vector<typename Set::value_type> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Checks shared by A-graphs and pre-A-graphs. Returns false when the input is
// too broken for the remaining checks.
bool validate_common(const AGraph& g, std::vector<Violation>& out)
{
    const Graph& G = g.graph;
    const BasisSpec& B = g.basis;
    if (G.num_vertices() == 0) {
        out.push_back({ViolationKind::malformed, "graph has no vertices"});
        return false;
    }
    if (static_cast<int>(g.wedges.size()) != B.num_factors()) {
        out.push_back({ViolationKind::wedge_shape, "expected " + std::to_string(B.num_factors()) + " wedge cycles, found " +
                                                       std::to_string(g.wedges.size())});
        return false;
    }
    bool shape_ok = true;
    for (std::size_t j = 0; j < g.wedges.size(); ++j) {
        const Wedge& w = g.wedges[j];
        const std::string name = "wedge " + std::to_string(j + 1);
        if (w.base < 0 || w.base >= G.num_vertices()) {
            out.push_back({ViolationKind::malformed, name + " has an unknown base"});
            shape_ok = false;
        }
        if (static_cast<int>(w.circles.size()) != B.factor_rank(static_cast<int>(j))) {
            out.push_back({ViolationKind::wedge_shape, name + " has " + std::to_string(w.circles.size()) + " circles, expected " +
                                                           std::to_string(B.factor_rank(static_cast<int>(j)))});
            shape_ok = false;
        }
        for (const auto& c : w.circles)
            for (Dart d : c)
                if (d < 0 || d >= G.num_darts()) {
                    out.push_back({ViolationKind::malformed, name + " uses unknown dart " + std::to_string(d)});
                    shape_ok = false;
                }
    }
    if (!shape_ok) return false;

    if (!G.connected()) {
        out.push_back({ViolationKind::disconnected, "graph is disconnected"});
        return false;
    }
    if (G.rank() != B.rank())
        out.push_back({ViolationKind::wrong_rank, "rank " + std::to_string(G.rank()) + ", expected " + std::to_string(B.rank())});

    const bool single_loop = G.num_vertices() == 1 && G.num_edges() == 1;
    if (!single_loop)
        for (Vertex v = 0; v < G.num_vertices(); ++v)
            if (G.valence(v) < 3)
                out.push_back({ViolationKind::low_valence, "vertex " + std::to_string(v) + " has valence " + std::to_string(G.valence(v))});

    for (std::size_t j = 0; j < g.wedges.size(); ++j) {
        const Wedge& w = g.wedges[j];
        std::vector<std::set<Vertex>> circle_vertices;
        std::vector<std::set<EdgeId>> circle_edges;
        for (std::size_t i = 0; i < w.circles.size(); ++i) {
            const auto& c = w.circles[i];
            const std::string name = "circle " + std::to_string(i + 1) + " of wedge " + std::to_string(j + 1);
            std::set<Vertex> vs;
            std::set<EdgeId> es;
            bool embedded = is_closed_path(G, c);
            if (!embedded) {
                out.push_back({ViolationKind::circle_not_embedded, name + " is not a closed path"});
            } else {
                for (Dart d : c) {
                    embedded = vs.insert(G.origin(d)).second && embedded;
                    embedded = es.insert(edge_of(d)).second && embedded;
                }
                if (!embedded) out.push_back({ViolationKind::circle_not_embedded, name + " is not embedded"});
                if (G.origin(c.front()) != w.base)
                    out.push_back({ViolationKind::wedge_shape, name + " does not start at the wedge base"});
            }
            circle_vertices.push_back(std::move(vs));
            circle_edges.push_back(std::move(es));
        }
        for (std::size_t a = 0; a < w.circles.size(); ++a)
            for (std::size_t b = a + 1; b < w.circles.size(); ++b) {
                const std::string name = "circles " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " of wedge " +
                                         std::to_string(j + 1);
                if (!intersect(circle_edges[a], circle_edges[b]).empty())
                    out.push_back({ViolationKind::wedge_circles_overlap, name + " share an edge"});
                const auto common = intersect(circle_vertices[a], circle_vertices[b]);
                if (common.size() != 1 || common.front() != w.base)
                    out.push_back({ViolationKind::wedge_circles_overlap, name + " do not meet exactly in the base"});
            }
    }
    return true;
}

}  // namespace

std::vector<Violation> validate_agraph(const AGraph& g)
{
    std::vector<Violation> out;
    if (!validate_common(g, out)) return out;
    const auto fp = footprints(g);
    for (std::size_t a = 0; a < fp.size(); ++a)
        for (std::size_t b = a + 1; b < fp.size(); ++b) {
            if (!intersect(fp[a].edges, fp[b].edges).empty())
                out.push_back({ViolationKind::wedges_share_edge, wedge_pair(a, b) + " share an edge"});
            if (intersect(fp[a].vertices, fp[b].vertices).size() > 1)
                out.push_back({ViolationKind::wedges_meet_twice, wedge_pair(a, b) + " meet in more than a point"});
        }
    if (!dual_graph(g).is_forest()) out.push_back({ViolationKind::dual_graph_cycle, "dual graph contains a cycle"});
    return out;
}

std::vector<Violation> validate_pre_agraph(const PreAGraph& g)
{
    std::vector<Violation> out;
    if (!validate_common(g, out)) return out;
    const auto fp = footprints(g);
    std::set<EdgeId> union_edges;
    for (std::size_t a = 0; a < fp.size(); ++a)
        for (std::size_t b = a + 1; b < fp.size(); ++b) {
            const auto vs = intersect(fp[a].vertices, fp[b].vertices);
            const auto es = intersect(fp[a].edges, fp[b].edges);
            union_edges.insert(es.begin(), es.end());
            if (vs.empty()) continue;
            detail::Dsu dsu(g.graph.num_vertices());
            bool acyclic = true;
            for (EdgeId e : es) acyclic = dsu.unite(g.graph.origin(2 * e), g.graph.origin(2 * e + 1)) && acyclic;
            std::set<int> roots;
            for (Vertex v : vs) roots.insert(dsu.find(v));
            if (!acyclic || roots.size() != 1)
                out.push_back({ViolationKind::intersection_not_tree, wedge_pair(a, b) + " do not meet in a point or a tree"});
        }
    detail::Dsu dsu(g.graph.num_vertices());
    for (EdgeId e : union_edges)
        if (!dsu.unite(g.graph.origin(2 * e), g.graph.origin(2 * e + 1))) {
            out.push_back({ViolationKind::intersections_not_forest, "union of wedge intersections contains a cycle"});
            break;
        }
    const Graph hat = collapse_wedges(g);
    if (hat.connected() && hat.rank() != g.basis.num_free())
        out.push_back({ViolationKind::collapsed_rank, "collapsed graph has rank " + std::to_string(hat.rank()) + ", expected " +
                                                          std::to_string(g.basis.num_free())});
    return out;
}

AGraph relative_rose(const BasisSpec& basis)
{
    AGraph g;
    g.basis = basis;
    g.graph = Graph(1, {});
    for (int j = 0; j < basis.num_factors(); ++j) {
        const Vertex w = g.graph.add_vertex();
        g.graph.add_edge(0, w);
        Wedge wedge;
        wedge.base = w;
        for (int i = 0; i < basis.factor_rank(j); ++i) wedge.circles.push_back({2 * g.graph.add_edge(w, w)});
        g.wedges.push_back(std::move(wedge));
    }
    for (int i = 0; i < basis.num_free(); ++i) g.graph.add_edge(0, 0);
    return g;
}

AGraph rose(const BasisSpec& basis)
{
    AGraph g;
    g.basis = basis;
    g.graph = Graph(1, {});
    for (int x = 0; x < basis.rank(); ++x) g.graph.add_edge(0, 0);
    for (int j = 0; j < basis.num_factors(); ++j) {
        Wedge wedge;
        for (int i = 0; i < basis.factor_rank(j); ++i) wedge.circles.push_back({2 * basis.y(j, i)});
        g.wedges.push_back(std::move(wedge));
    }
    return g;
}

Graph collapse_wedges(const AGraph& g)
{
    const Graph& G = g.graph;
    const auto mask = g.edge_wedge_mask();
    detail::Dsu dsu(G.num_vertices());
    for (EdgeId e = 0; e < G.num_edges(); ++e)
        if (mask[static_cast<std::size_t>(e)] != 0) dsu.unite(G.origin(2 * e), G.origin(2 * e + 1));
    std::vector<int> id(static_cast<std::size_t>(G.num_vertices()), -1);
    int next = 0;
    for (Vertex v = 0; v < G.num_vertices(); ++v) {
        const int r = dsu.find(v);
        if (id[static_cast<std::size_t>(r)] < 0) id[static_cast<std::size_t>(r)] = next++;
    }
    Graph hat(next, {});
    for (EdgeId e = 0; e < G.num_edges(); ++e)
        if (mask[static_cast<std::size_t>(e)] == 0)
            hat.add_edge(id[static_cast<std::size_t>(dsu.find(G.origin(2 * e)))], id[static_cast<std::size_t>(dsu.find(G.origin(2 * e + 1)))]);
    return hat;
}

int DualGraph::betti1() const
{
    const int nv = num_wedges + static_cast<int>(meeting_points.size());
    if (nv == 0) return 0;
    detail::Dsu dsu(nv);
    for (const auto& [j, p] : edges) dsu.unite(j, num_wedges + p);
    return static_cast<int>(edges.size()) - nv + dsu.components();
}

DualGraph dual_graph(const AGraph& g)
{
    DualGraph d;
    d.num_wedges = static_cast<int>(g.wedges.size());
    const auto mask = g.vertex_wedge_mask();
    for (Vertex v = 0; v < g.graph.num_vertices(); ++v) {
        const std::uint32_t m = mask[static_cast<std::size_t>(v)];
        if (std::popcount(m) < 2) continue;
        const int p = static_cast<int>(d.meeting_points.size());
        d.meeting_points.push_back(v);
        for (int j = 0; j < d.num_wedges; ++j)
            if (m & (1u << j)) d.edges.emplace_back(j, p);
    }
    return d;
}

bool is_forest(const AGraph& g, const std::vector<EdgeId>& edges)
{
    const Graph& G = g.graph;
    std::set<EdgeId> seen;
    for (EdgeId e : edges)
        if (e < 0 || e >= G.num_edges() || !seen.insert(e).second) return false;
    detail::Dsu in_graph(G.num_vertices());
    for (EdgeId e : edges)
        if (!in_graph.unite(G.origin(2 * e), G.origin(2 * e + 1))) return false;
    const auto mask = g.edge_wedge_mask();
    detail::Dsu in_hat(G.num_vertices());
    for (EdgeId e = 0; e < G.num_edges(); ++e)
        if (mask[static_cast<std::size_t>(e)] != 0) in_hat.unite(G.origin(2 * e), G.origin(2 * e + 1));
    for (EdgeId e : edges)
        if (mask[static_cast<std::size_t>(e)] == 0 && !in_hat.unite(G.origin(2 * e), G.origin(2 * e + 1))) return false;
    return true;
}

CollapseResult contract_edges(const AGraph& g, const std::vector<EdgeId>& edges)
{
    const Graph& G = g.graph;
    std::vector<bool> gone(static_cast<std::size_t>(G.num_edges()), false);
    detail::Dsu dsu(G.num_vertices());
    for (EdgeId e : edges) {
        if (e < 0 || e >= G.num_edges()) throw InputError("unknown edge " + std::to_string(e));
        gone[static_cast<std::size_t>(e)] = true;
        dsu.unite(G.origin(2 * e), G.origin(2 * e + 1));
    }
    CollapseResult r;
    r.vertex_map.assign(static_cast<std::size_t>(G.num_vertices()), -1);
    std::vector<int> id(static_cast<std::size_t>(G.num_vertices()), -1);
    int next = 0;
    for (Vertex v = 0; v < G.num_vertices(); ++v) {
        const int root = dsu.find(v);
        if (id[static_cast<std::size_t>(root)] < 0) id[static_cast<std::size_t>(root)] = next++;
        r.vertex_map[static_cast<std::size_t>(v)] = id[static_cast<std::size_t>(root)];
    }
    r.graph.basis = g.basis;
    r.graph.graph = Graph(next, {});
    r.dart_map.assign(static_cast<std::size_t>(G.num_darts()), -1);
    for (EdgeId e = 0; e < G.num_edges(); ++e) {
        if (gone[static_cast<std::size_t>(e)]) continue;
        const EdgeId ne = r.graph.graph.add_edge(r.vertex_map[static_cast<std::size_t>(G.origin(2 * e))],
                                                 r.vertex_map[static_cast<std::size_t>(G.origin(2 * e + 1))]);
        r.dart_map[static_cast<std::size_t>(2 * e)] = 2 * ne;
        r.dart_map[static_cast<std::size_t>(2 * e + 1)] = 2 * ne + 1;
    }
    for (const Wedge& w : g.wedges) {
        Wedge nw;
        nw.base = r.vertex_map[static_cast<std::size_t>(w.base)];
        for (const auto& c : w.circles) {
            std::vector<Dart> nc;
            for (Dart d : c)
                if (r.dart_map[static_cast<std::size_t>(d)] >= 0) nc.push_back(r.dart_map[static_cast<std::size_t>(d)]);
            nw.circles.push_back(std::move(nc));
        }
        r.graph.wedges.push_back(std::move(nw));
    }
    return r;
}

namespace {

std::string describe(const std::vector<Violation>& vs)
{
    std::string s;
    for (const auto& v : vs) s += (s.empty() ? "" : "; ") + v.message;
    return s;
}

}  // namespace

CollapseResult collapse_forest(const AGraph& g, const std::vector<EdgeId>& forest, bool pre_agraph)
{
    if (!is_forest(g, forest)) throw InputError("edge set is not a forest");
    CollapseResult r = contract_edges(g, forest);
    const auto violations = pre_agraph ? validate_pre_agraph(r.graph) : validate_agraph(r.graph);
    if (!violations.empty()) throw VerificationError("collapse is not valid: " + describe(violations));
    return r;
}

std::vector<std::vector<EdgeId>> collapsible_forests(const AGraph& g, bool pre_agraph)
{
    const int ne = g.graph.num_edges();
    if (ne > 24) throw InputError("too many edges for forest enumeration");
    std::vector<std::vector<EdgeId>> out;
    for (std::uint32_t mask = 1; mask < (1u << ne); ++mask) {
        std::vector<EdgeId> f;
        for (int e = 0; e < ne; ++e)
            if (mask & (1u << e)) f.push_back(e);
        if (static_cast<int>(f.size()) >= g.graph.num_vertices()) continue;
        if (!is_forest(g, f)) continue;
        const CollapseResult r = contract_edges(g, f);
        const auto violations = pre_agraph ? validate_pre_agraph(r.graph) : validate_agraph(r.graph);
        if (violations.empty()) out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

CollapseResult collapse_wedge_intersections(const PreAGraph& g)
{
    const auto in = validate_pre_agraph(g);
    if (!in.empty()) throw InputError("not a pre-A-graph: " + describe(in));
    const auto fp = footprints(g);
    std::set<EdgeId> shared;
    for (std::size_t a = 0; a < fp.size(); ++a)
        for (std::size_t b = a + 1; b < fp.size(); ++b) {
            const auto es = intersect(fp[a].edges, fp[b].edges);
            shared.insert(es.begin(), es.end());
        }
    CollapseResult r = contract_edges(g, {shared.begin(), shared.end()});
    const auto out = validate_agraph(r.graph);
    if (!out.empty()) throw VerificationError("collapsing wedge intersections did not give an A-graph: " + describe(out));
    return r;
}

std::vector<IdealEdge> ideal_edges_at(const AGraph& g, Vertex v)
{
    const auto darts = g.graph.darts_at(v);
    const int d = static_cast<int>(darts.size());
    std::vector<IdealEdge> out;
    if (d < 4) return out;
    if (d > 24) throw InputError("valence too large for ideal edge enumeration");
    for (std::uint32_t mask = 0; mask < (1u << (d - 1)); ++mask) {
        const int size = std::popcount(mask);
        if (size < 2 || size > d - 2) continue;
        IdealEdge e{v, {}};
        for (int i = 0; i < d - 1; ++i)
            if (mask & (1u << i)) e.pulled.push_back(darts[static_cast<std::size_t>(i + 1)]);
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const IdealEdge& a, const IdealEdge& b) {
        return a.pulled.size() != b.pulled.size() ? a.pulled.size() < b.pulled.size() : a.pulled < b.pulled;
    });
    return out;
}

bool compatible(const AGraph&, const IdealEdge& a, const IdealEdge& b)
{
    if (a.vertex != b.vertex) return true;
    // Both sides avoid the smallest dart, so the complement-complement block is
    // never empty; compatibility reduces to nested or disjoint.
    const auto& A = a.pulled;
    const auto& B = b.pulled;
    if (std::includes(A.begin(), A.end(), B.begin(), B.end())) return true;
    if (std::includes(B.begin(), B.end(), A.begin(), A.end())) return true;
    return intersect(std::set<Dart>(A.begin(), A.end()), std::set<Dart>(B.begin(), B.end())).empty();
}

namespace {

struct CirclePair {
    int wedge;
    int circle;
    Dart in;   // dart leaving v backwards along the circle
    Dart out;  // dart leaving v forwards
};

std::vector<CirclePair> circle_pairs_at(const AGraph& g, Vertex v)
{
    std::vector<CirclePair> out;
    for (std::size_t j = 0; j < g.wedges.size(); ++j)
        for (std::size_t i = 0; i < g.wedges[j].circles.size(); ++i) {
            const auto& c = g.wedges[j].circles[i];
            for (std::size_t p = 0; p < c.size(); ++p)
                if (g.graph.terminus(c[p]) == v)
                    out.push_back({static_cast<int>(j), static_cast<int>(i), reverse_dart(c[p]), c[(p + 1) % c.size()]});
        }
    return out;
}

bool pulled_contains(const IdealEdge& e, Dart d)
{
    return std::binary_search(e.pulled.begin(), e.pulled.end(), d);
}

}  // namespace

int separated_wedge_pairs(const AGraph& g, const IdealEdge& e)
{
    int count = 0;
    for (const auto& p : circle_pairs_at(g, e.vertex))
        if (pulled_contains(e, p.in) != pulled_contains(e, p.out)) ++count;
    return count;
}

bool remark_legal(const AGraph& g, const IdealEdge& e) { return separated_wedge_pairs(g, e) <= 1; }

bool coherent_legal(const AGraph& g, const IdealEdge& e)
{
    if (!remark_legal(g, e)) return false;
    std::map<int, std::set<bool>> sides;
    for (const auto& p : circle_pairs_at(g, e.vertex)) {
        if (g.wedges[static_cast<std::size_t>(p.wedge)].base != e.vertex) continue;
        const bool a = pulled_contains(e, p.in);
        if (a == pulled_contains(e, p.out)) sides[p.wedge].insert(a);
    }
    for (const auto& [j, s] : sides)
        if (s.size() > 1) return false;
    return true;
}

bool is_legal(const AGraph& g, const IdealEdge& e)
{
    try {
        return validate_agraph(blow_up(g, e.vertex, {e}).graph).empty();
    } catch (const InputError&) {
        return false;
    }
}

BlowUpResult blow_up(const AGraph& g, Vertex v, const std::vector<IdealEdge>& family)
{
    const Graph& G = g.graph;
    if (v < 0 || v >= G.num_vertices()) throw InputError("unknown vertex " + std::to_string(v));
    const auto darts = G.darts_at(v);
    const std::size_t nf = family.size();
    for (std::size_t a = 0; a < nf; ++a) {
        const IdealEdge& e = family[a];
        if (e.vertex != v) throw InputError("ideal edge at a different vertex");
        if (!std::is_sorted(e.pulled.begin(), e.pulled.end()) || e.pulled.size() < 2 || e.pulled.size() + 2 > darts.size())
            throw InputError("malformed ideal edge");
        for (Dart d : e.pulled)
            if (!std::binary_search(darts.begin(), darts.end(), d) || d == darts.front())
                throw InputError("ideal edge uses a dart outside the vertex or the reference dart");
        for (std::size_t b = 0; b < a; ++b) {
            if (family[b] == e) throw InputError("repeated ideal edge");
            if (!compatible(g, family[b], e)) throw InputError("incompatible ideal edges");
        }
    }
    // Tree: node a for family[a], parent = smallest strictly larger set containing it.
    std::vector<int> parent(nf, -1);
    for (std::size_t a = 0; a < nf; ++a) {
        std::size_t best = 0;
        for (std::size_t b = 0; b < nf; ++b) {
            if (b == a || family[b].pulled.size() <= family[a].pulled.size()) continue;
            const auto& A = family[a].pulled;
            const auto& B = family[b].pulled;
            if (!std::includes(B.begin(), B.end(), A.begin(), A.end())) continue;
            if (parent[a] < 0 || B.size() < best) {
                parent[a] = static_cast<int>(b);
                best = B.size();
            }
        }
    }
    std::map<Dart, int> attach;  // -1 is the root
    for (Dart d : darts) {
        int node = -1;
        std::size_t best = 0;
        for (std::size_t a = 0; a < nf; ++a)
            if (pulled_contains(family[a], d) && (node < 0 || family[a].pulled.size() < best)) {
                node = static_cast<int>(a);
                best = family[a].pulled.size();
            }
        attach[d] = node;
    }
    std::vector<int> degree(nf + 1, 0);  // index nf is the root
    auto slot = [&](int node) { return node < 0 ? nf : static_cast<std::size_t>(node); };
    for (const auto& [d, node] : attach) ++degree[slot(node)];
    for (std::size_t a = 0; a < nf; ++a) {
        ++degree[a];
        ++degree[slot(parent[a])];
    }
    for (std::size_t a = 0; a <= nf; ++a)
        if (degree[a] < 3) throw InputError("blow-up creates a vertex of valence " + std::to_string(degree[a]));

    BlowUpResult r;
    std::vector<Vertex> origin = G.origins();
    const int base_vertex = G.num_vertices();
    auto vertex_of = [&](int node) { return node < 0 ? v : base_vertex + node; };
    for (const auto& [d, node] : attach) origin[static_cast<std::size_t>(d)] = vertex_of(node);
    Graph H(G.num_vertices() + static_cast<int>(nf), std::move(origin));
    for (std::size_t a = 0; a < nf; ++a) r.new_edges.push_back(H.add_edge(vertex_of(static_cast<int>(a)), vertex_of(parent[a])));

    const std::vector<EdgeId> new_edges = r.new_edges;
    // Darts along the tree from node a to node b.
    auto tree_path = [parent, new_edges](int a, int b) {
        auto ancestors = [&](int x) {
            std::vector<int> chain{x};
            while (x >= 0) {
                x = parent[static_cast<std::size_t>(x)];
                chain.push_back(x);
            }
            return chain;
        };
        const auto ua = ancestors(a);
        const auto ub = ancestors(b);
        int lca = -1;
        for (int x : ua)
            if (std::find(ub.begin(), ub.end(), x) != ub.end()) {
                lca = x;
                break;
            }
        std::vector<Dart> path;
        for (int x = a; x != lca; x = parent[static_cast<std::size_t>(x)]) path.push_back(2 * new_edges[static_cast<std::size_t>(x)]);
        std::vector<Dart> down;
        for (int x = b; x != lca; x = parent[static_cast<std::size_t>(x)]) down.push_back(2 * new_edges[static_cast<std::size_t>(x)] + 1);
        path.insert(path.end(), down.rbegin(), down.rend());
        return path;
    };
    auto lift = [G, v, attach, tree_path](const std::vector<Dart>& path, bool cyclic) {
        std::vector<Dart> out;
        if (path.empty()) return out;
        auto node_of = [&](Dart d) { return attach.at(d); };
        if (!cyclic && G.origin(path.front()) == v) {
            const auto seg = tree_path(-1, node_of(path.front()));
            out.insert(out.end(), seg.begin(), seg.end());
        }
        for (std::size_t i = 0; i < path.size(); ++i) {
            out.push_back(path[i]);
            const bool last = i + 1 == path.size();
            if (last && !cyclic) break;
            const Dart next = path[last ? 0 : i + 1];
            if (G.terminus(path[i]) == v) {
                const auto seg = tree_path(node_of(reverse_dart(path[i])), node_of(next));
                out.insert(out.end(), seg.begin(), seg.end());
            }
        }
        if (!cyclic && G.terminus(path.back()) == v) {
            const auto seg = tree_path(node_of(reverse_dart(path.back())), -1);
            out.insert(out.end(), seg.begin(), seg.end());
        }
        return out;
    };
    r.lift_path = [lift](const std::vector<Dart>& path) { return lift(path, false); };

    r.graph.graph = H;
    r.graph.basis = g.basis;
    for (const Wedge& w : g.wedges) {
        Wedge nw;
        nw.base = w.base;
        for (const auto& c : w.circles) {
            auto lifted = lift(c, true);
            if (w.base == v && !lifted.empty()) {
                // The wrap-around segment was appended after the last dart; rotate it to the front.
                const std::size_t wrap = lifted.size() - (std::find(lifted.rbegin(), lifted.rend(), c.back()) - lifted.rbegin());
                std::rotate(lifted.begin(), lifted.begin() + static_cast<std::ptrdiff_t>(wrap), lifted.end());
            }
            nw.circles.push_back(std::move(lifted));
        }
        if (w.base == v && !nw.circles.empty()) {
            std::set<Vertex> common;
            for (Dart d : nw.circles.front()) common.insert(H.origin(d));
            for (std::size_t i = 1; i < nw.circles.size(); ++i) {
                std::set<Vertex> here;
                for (Dart d : nw.circles[i]) here.insert(H.origin(d));
                const auto both = intersect(common, here);
                common = std::set<Vertex>(both.begin(), both.end());
            }
            if (nw.circles.size() == 1) {
                nw.base = H.origin(nw.circles.front().front());
            } else if (common.size() == 1) {
                nw.base = *common.begin();
                for (auto& c : nw.circles) {
                    auto it = std::find_if(c.begin(), c.end(), [&](Dart d) { return H.origin(d) == nw.base; });
                    std::rotate(c.begin(), it, c.end());
                }
            }
        }
        r.graph.wedges.push_back(std::move(nw));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Canonical form

namespace {

struct Canon {
    std::vector<int> code;
    std::vector<std::vector<int>> perms;  // old vertex -> canonical label, all optimal ones
};

std::vector<int> encode(const Graph& G, const std::vector<std::uint32_t>& labels, const std::vector<int>& perm)
{
    std::vector<std::array<int, 3>> triples;
    triples.reserve(static_cast<std::size_t>(G.num_edges()));
    for (EdgeId e = 0; e < G.num_edges(); ++e) {
        int a = perm[static_cast<std::size_t>(G.origin(2 * e))];
        int b = perm[static_cast<std::size_t>(G.origin(2 * e + 1))];
        if (a > b) std::swap(a, b);
        triples.push_back({a, b, static_cast<int>(labels[static_cast<std::size_t>(e)])});
    }
    std::sort(triples.begin(), triples.end());
    std::vector<int> code{G.num_vertices(), G.num_edges()};
    for (const auto& t : triples) code.insert(code.end(), t.begin(), t.end());
    return code;
}

// Colour refinement on vertices; colours are ranks of sorted signatures so the
// result depends only on the isomorphism class.
std::vector<int> refine(const Graph& G, const std::vector<std::uint32_t>& labels)
{
    const int nv = G.num_vertices();
    std::vector<std::vector<long long>> sig(static_cast<std::size_t>(nv));
    for (Dart d = 0; d < G.num_darts(); ++d) {
        const EdgeId e = edge_of(d);
        const long long loop = G.is_loop(e) ? 1 : 0;
        sig[static_cast<std::size_t>(G.origin(d))].push_back(static_cast<long long>(labels[static_cast<std::size_t>(e)]) * 2 + loop);
    }
    std::vector<int> colour(static_cast<std::size_t>(nv), 0);
    auto assign = [&](std::vector<std::vector<long long>>& s) {
        for (auto& x : s) std::sort(x.begin(), x.end());
        std::vector<std::vector<long long>> sorted = s;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (int v = 0; v < nv; ++v)
            colour[static_cast<std::size_t>(v)] = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), s[static_cast<std::size_t>(v)]) - sorted.begin());
        return static_cast<int>(sorted.size());
    };
    int classes = assign(sig);
    for (int round = 0; round < nv; ++round) {
        std::vector<std::vector<long long>> next(static_cast<std::size_t>(nv));
        for (int v = 0; v < nv; ++v) next[static_cast<std::size_t>(v)].push_back(-1 - colour[static_cast<std::size_t>(v)]);
        for (Dart d = 0; d < G.num_darts(); ++d) {
            const EdgeId e = edge_of(d);
            const long long other = colour[static_cast<std::size_t>(G.terminus(d))];
            next[static_cast<std::size_t>(G.origin(d))].push_back(other * 4096 + static_cast<long long>(labels[static_cast<std::size_t>(e)]));
        }
        const int now = assign(next);
        if (now == classes) break;
        classes = now;
    }
    return colour;
}

Canon canonicalize(const Graph& G, const std::vector<std::uint32_t>& labels, bool keep_all)
{
    const int nv = G.num_vertices();
    const auto colour = refine(G, labels);
    std::vector<int> order(static_cast<std::size_t>(nv));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return colour[static_cast<std::size_t>(a)] < colour[static_cast<std::size_t>(b)]; });
    // Cells of equal colour; the canonical labels of a cell are fixed, the
    // vertices inside it are permuted.
    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i < nv;) {
        int j = i;
        while (j < nv && colour[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] == colour[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]) ++j;
        cells.emplace_back(i, j);
        i = j;
    }
    Canon best;
    std::vector<int> arrangement = order;
    std::vector<int> perm(static_cast<std::size_t>(nv));
    std::function<void(std::size_t)> rec = [&](std::size_t c) {
        if (c == cells.size()) {
            for (int i = 0; i < nv; ++i) perm[static_cast<std::size_t>(arrangement[static_cast<std::size_t>(i)])] = i;
            auto code = encode(G, labels, perm);
            if (best.code.empty() || code < best.code) {
                best.code = std::move(code);
                best.perms.assign(1, perm);
            } else if (keep_all && code == best.code) {
                best.perms.push_back(perm);
            }
            return;
        }
        auto first = arrangement.begin() + cells[c].first;
        auto last = arrangement.begin() + cells[c].second;
        std::sort(first, last);
        do {
            rec(c + 1);
        } while (std::next_permutation(first, last));
    };
    rec(0);
    return best;
}

std::string key_of(const std::vector<int>& code)
{
    std::ostringstream os;
    os << "V" << code[0] << "E" << code[1] << ':';
    for (std::size_t i = 2; i + 2 < code.size(); i += 3) {
        os << code[i] << '-' << code[i + 1];
        if (code[i + 2] != 0) os << '#' << code[i + 2];
        os << ';';
    }
    return os.str();
}

}  // namespace

TypeKey canonical_form(const AGraph& g)
{
    return key_of(canonicalize(g.graph, g.edge_wedge_mask(), false).code);
}

namespace detail {

TypeKey canonical_key(const Graph& g, const std::vector<std::uint32_t>& labels)
{
    return key_of(canonicalize(g, labels, false).code);
}

}  // namespace detail

void for_each_isomorphism(const AGraph& a, const AGraph& b, const std::function<bool(const GraphIsomorphism&)>& visit)
{
    const Graph& A = a.graph;
    const Graph& B = b.graph;
    if (A.num_vertices() != B.num_vertices() || A.num_edges() != B.num_edges()) return;
    const auto la = a.edge_wedge_mask();
    const auto lb = b.edge_wedge_mask();
    const Canon ca = canonicalize(A, la, true);
    const Canon cb = canonicalize(B, lb, false);
    if (ca.code != cb.code) return;
    std::vector<int> inv_b(static_cast<std::size_t>(B.num_vertices()));
    for (int v = 0; v < B.num_vertices(); ++v) inv_b[static_cast<std::size_t>(cb.perms.front()[static_cast<std::size_t>(v)])] = v;

    using Slot = std::tuple<int, int, std::uint32_t>;
    std::map<Slot, std::vector<EdgeId>> b_groups;
    for (EdgeId e = 0; e < B.num_edges(); ++e) {
        int u = B.origin(2 * e), w = B.origin(2 * e + 1);
        if (u > w) std::swap(u, w);
        b_groups[{u, w, lb[static_cast<std::size_t>(e)]}].push_back(e);
    }
    for (const auto& pa : ca.perms) {
        GraphIsomorphism iso;
        iso.vertex_map.resize(static_cast<std::size_t>(A.num_vertices()));
        for (int v = 0; v < A.num_vertices(); ++v) iso.vertex_map[static_cast<std::size_t>(v)] = inv_b[static_cast<std::size_t>(pa[static_cast<std::size_t>(v)])];
        std::map<Slot, std::vector<EdgeId>> a_groups;
        for (EdgeId e = 0; e < A.num_edges(); ++e) {
            int u = iso.vertex_map[static_cast<std::size_t>(A.origin(2 * e))];
            int w = iso.vertex_map[static_cast<std::size_t>(A.origin(2 * e + 1))];
            if (u > w) std::swap(u, w);
            a_groups[{u, w, la[static_cast<std::size_t>(e)]}].push_back(e);
        }
        std::vector<std::pair<std::vector<EdgeId>, std::vector<EdgeId>>> groups;
        for (auto& [slot, es] : a_groups) groups.emplace_back(es, b_groups.at(slot));
        iso.dart_map.assign(static_cast<std::size_t>(A.num_darts()), -1);
        bool stop = false;
        // Edge bijection per group, then loop orientations.
        std::function<void(std::size_t)> rec = [&](std::size_t gi) {
            if (stop) return;
            if (gi == groups.size()) {
                std::vector<EdgeId> loops;
                for (EdgeId e = 0; e < A.num_edges(); ++e)
                    if (A.is_loop(e)) loops.push_back(e);
                for (std::uint64_t flips = 0; flips < (1ull << loops.size()) && !stop; ++flips) {
                    for (std::size_t i = 0; i < loops.size(); ++i) {
                        const EdgeId e = loops[i];
                        const Dart t = iso.dart_map[static_cast<std::size_t>(2 * e)] & ~1;
                        const bool f = (flips >> i) & 1u;
                        iso.dart_map[static_cast<std::size_t>(2 * e)] = t | (f ? 1 : 0);
                        iso.dart_map[static_cast<std::size_t>(2 * e + 1)] = t | (f ? 0 : 1);
                    }
                    if (!visit(iso)) stop = true;
                }
                return;
            }
            auto& [src, dst] = groups[gi];
            std::vector<EdgeId> image = dst;
            std::sort(image.begin(), image.end());
            do {
                for (std::size_t i = 0; i < src.size(); ++i) {
                    const EdgeId e = src[i];
                    const EdgeId f = image[i];
                    const bool straight = B.origin(2 * f) == iso.vertex_map[static_cast<std::size_t>(A.origin(2 * e))];
                    iso.dart_map[static_cast<std::size_t>(2 * e)] = straight ? 2 * f : 2 * f + 1;
                    iso.dart_map[static_cast<std::size_t>(2 * e + 1)] = straight ? 2 * f + 1 : 2 * f;
                }
                rec(gi + 1);
            } while (!stop && std::next_permutation(image.begin(), image.end()));
        };
        rec(0);
        if (stop) return;
    }
}

}  // namespace relspine
