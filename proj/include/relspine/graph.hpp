#pragma once

// Half-edge multigraphs carrying a system of wedge cycles.
//
// Darts come in pairs: edge e owns darts 2e and 2e+1, and reverse(d) = d ^ 1.
// origin(d) is the vertex the dart leaves from. A loop has both darts at the
// same vertex. A wedge cycle B_j is a list of s(j) circles, each a closed
// dart path starting and ending at the wedge base.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relspine/free_group.hpp"

namespace relspine {

using Dart = int;
using Vertex = int;
using EdgeId = int;

inline constexpr Dart reverse_dart(Dart d) { return d ^ 1; }
inline constexpr EdgeId edge_of(Dart d) { return d >> 1; }

class Graph {
public:
    Graph() = default;
    /// origin[d] for every dart; the dart count must be even.
    Graph(int num_vertices, std::vector<Vertex> origin);

    /// Appends an edge from u to v and returns its id (dart 2e leaves u).
    EdgeId add_edge(Vertex u, Vertex v);
    Vertex add_vertex() { return num_vertices_++; }

    int num_vertices() const { return num_vertices_; }
    int num_edges() const { return static_cast<int>(origin_.size() / 2); }
    int num_darts() const { return static_cast<int>(origin_.size()); }
    Vertex origin(Dart d) const { return origin_.at(static_cast<std::size_t>(d)); }
    Vertex terminus(Dart d) const { return origin(reverse_dart(d)); }
    bool is_loop(EdgeId e) const { return origin(2 * e) == origin(2 * e + 1); }
    const std::vector<Vertex>& origins() const { return origin_; }

    /// Darts leaving v, ascending.
    std::vector<Dart> darts_at(Vertex v) const;
    int valence(Vertex v) const;
    bool connected() const;
    /// First Betti number; throws InputError when disconnected.
    int rank() const;
    /// Edges whose removal disconnects the graph.
    std::vector<EdgeId> separating_edges() const;

private:
    int num_vertices_ = 0;
    std::vector<Vertex> origin_;
};

/// Closed dart path check: consecutive darts chain and the path returns to its start.
bool is_closed_path(const Graph& g, const std::vector<Dart>& path);

struct Wedge {
    Vertex base = 0;
    std::vector<std::vector<Dart>> circles;
};

/// Graph + wedge cycles + the factor signature they realize. The same value
/// type carries pre-A-graphs, whose distinct wedge cycles may share a tree.
struct AGraph {
    Graph graph;
    std::vector<Wedge> wedges;
    BasisSpec basis;

    /// Bitmask of wedges whose circles use the edge.
    std::vector<std::uint32_t> edge_wedge_mask() const;
    /// Bitmask of wedges passing through each vertex.
    std::vector<std::uint32_t> vertex_wedge_mask() const;
    /// Number of edges on wedge circle (j, i).
    int circle_length(int j, int i) const
    {
        return static_cast<int>(wedges.at(static_cast<std::size_t>(j)).circles.at(static_cast<std::size_t>(i)).size());
    }
};
using PreAGraph = AGraph;

enum class ViolationKind {
    malformed,
    disconnected,
    wrong_rank,
    low_valence,
    wedge_shape,
    circle_not_embedded,
    wedge_circles_overlap,
    wedges_share_edge,
    wedges_meet_twice,
    intersection_not_tree,
    intersections_not_forest,
    dual_graph_cycle,
    collapsed_rank,
};

struct Violation {
    ViolationKind kind;
    std::string message;
};

std::string to_string(ViolationKind kind);

/// Every violation of the (A,n)-graph axioms.
std::vector<Violation> validate_agraph(const AGraph& g);
/// Pre-A-graph axioms: wedge pairs may meet in a tree; the union of those
/// intersections must be a forest.
std::vector<Violation> validate_pre_agraph(const PreAGraph& g);
inline bool is_valid_agraph(const AGraph& g) { return validate_agraph(g).empty(); }

/// Relative rose R_n(A): central vertex with the free loops, one stem per
/// factor ending at a vertex that carries that factor's circles.
AGraph relative_rose(const BasisSpec& basis);
/// Single-vertex rose: every generator a loop; wedge circles are the first Σs loops.
AGraph rose(const BasisSpec& basis);

int rank(const Graph& g);

/// Graph obtained by collapsing every connected component of the union of
/// wedge cycles to a point.
Graph collapse_wedges(const AGraph& g);

struct DualGraph {
    int num_wedges = 0;
    std::vector<Vertex> meeting_points;           ///< graph vertices on two or more wedges
    std::vector<std::pair<int, int>> edges;       ///< (wedge j, meeting point index)
    int betti1() const;
    bool is_forest() const { return betti1() == 0; }
};
/// Bipartite wedge / meeting-point graph.
DualGraph dual_graph(const AGraph& g);

/// Acyclic in the graph and, after collapsing wedge components, still acyclic.
bool is_forest(const AGraph& g, const std::vector<EdgeId>& edges);

struct CollapseResult {
    AGraph graph;
    std::vector<Dart> dart_map;     ///< old dart -> new dart, -1 if collapsed
    std::vector<Vertex> vertex_map; ///< old vertex -> new vertex
};
/// Contracts the edges; no validity checks on the result.
CollapseResult contract_edges(const AGraph& g, const std::vector<EdgeId>& edges);
/// Forest collapse; throws InputError on a non-forest and VerificationError
/// when the quotient fails validation.
CollapseResult collapse_forest(const AGraph& g, const std::vector<EdgeId>& forest, bool pre_agraph = false);
/// Every nonempty forest of g whose collapse is a valid (pre-)A-graph.
std::vector<std::vector<EdgeId>> collapsible_forests(const AGraph& g, bool pre_agraph = false);

/// Collapses each component of the union of pairwise wedge intersections.
CollapseResult collapse_wedge_intersections(const PreAGraph& g);

/// Unordered partition {pulled, rest} of the darts at a vertex; pulled never
/// contains the smallest dart at the vertex.
struct IdealEdge {
    Vertex vertex = 0;
    std::vector<Dart> pulled;
    auto operator<=>(const IdealEdge&) const = default;
};

std::vector<IdealEdge> ideal_edges_at(const AGraph& g, Vertex v);
bool compatible(const AGraph& g, const IdealEdge& a, const IdealEdge& b);

/// Number of wedge-circle dart pairs at the vertex split by the partition.
int separated_wedge_pairs(const AGraph& g, const IdealEdge& e);
/// Separates at most one pair of half edges lying on a common wedge circle.
bool remark_legal(const AGraph& g, const IdealEdge& e);
/// remark_legal plus: circles of one wedge based at the vertex that the
/// partition does not cut stay on a common side.
bool coherent_legal(const AGraph& g, const IdealEdge& e);
/// Authoritative: the blow-up is again a valid A-graph.
bool is_legal(const AGraph& g, const IdealEdge& e);

struct BlowUpResult {
    AGraph graph;
    std::vector<EdgeId> new_edges;  ///< one per ideal edge, family order
    /// Rewrites a dart path of the original graph as a path in the blown-up
    /// graph; endpoints at the blown-up vertex stay at its root.
    std::function<std::vector<Dart>(const std::vector<Dart>&)> lift_path;
};
/// Blows v up into the tree of a compatible family. Throws InputError when the
/// family is incompatible, repeats an ideal edge, or leaves a vertex of valence < 3.
BlowUpResult blow_up(const AGraph& g, Vertex v, const std::vector<IdealEdge>& family);

/// Isomorphism-invariant key. Isomorphisms preserve the wedge labels j and may
/// permute circles inside a wedge and reverse orientations.
using TypeKey = std::string;
TypeKey canonical_form(const AGraph& g);

struct GraphIsomorphism {
    std::vector<Vertex> vertex_map;
    std::vector<Dart> dart_map;
};
/// Calls visit for each label-preserving isomorphism a -> b until it returns false.
void for_each_isomorphism(const AGraph& a, const AGraph& b, const std::function<bool(const GraphIsomorphism&)>& visit);

namespace detail {
/// Canonical key of a multigraph with arbitrary integer edge labels.
TypeKey canonical_key(const Graph& g, const std::vector<std::uint32_t>& labels);
}  // namespace detail

}  // namespace relspine
