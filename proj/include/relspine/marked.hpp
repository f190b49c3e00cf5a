#pragma once

// Marked A-graphs: generator images as closed dart paths at a base vertex,
// marked equivalence, the Out action, and finite balls of the marked spine.

#include <optional>
#include <vector>

#include "relspine/complex.hpp"
#include "relspine/free_group.hpp"
#include "relspine/graph.hpp"

namespace relspine {

using DartPath = std::vector<Dart>;

/// Cancels adjacent d, reverse(d) pairs.
DartPath reduce_path(const DartPath& p);
DartPath reverse_path(const DartPath& p);

struct MarkedAGraph {
    AGraph graph;
    Vertex base = 0;
    /// Reduced closed path at base for every generator; circle i of wedge j
    /// carries y_i^j.
    std::vector<DartPath> images;
};

/// Single-vertex rose with the identity marking.
MarkedAGraph marked_rose(const BasisSpec& basis);

/// Word of a closed path in the free basis given by the non-tree edges of a
/// BFS spanning tree rooted at root.
class FundamentalGroup {
public:
    FundamentalGroup(const Graph& g, Vertex root);
    Word word(const DartPath& closed_path) const;
    /// Rank-n basis spec with no factors, matching the non-tree edges.
    const BasisSpec& basis() const { return basis_; }
    bool in_tree(EdgeId e) const { return generator_[static_cast<std::size_t>(e)] < 0; }

private:
    BasisSpec basis_;
    std::vector<int> generator_;  ///< per edge, -1 for tree edges
};

/// Marking of a graph with a rank-n basis and no factors by the loops of the
/// non-tree edges of FundamentalGroup(g, base), in edge order.
MarkedAGraph standard_marking(const Graph& g, Vertex base = 0);

/// Checks images are closed reduced paths at base, that circle i of wedge j
/// is the cyclic reduction of image(y_i^j), and that the induced map on
/// fundamental groups is a basis (Nielsen reduction).
std::vector<std::string> validate_marking(const MarkedAGraph& m);

/// (G, phi) . psi = (G, phi o psi). Throws InputError unless psi is relative.
MarkedAGraph act(const MarkedAGraph& m, const Automorphism& psi);
MarkedAGraph collapse(const MarkedAGraph& m, const std::vector<EdgeId>& forest);
MarkedAGraph blow_up(const MarkedAGraph& m, Vertex v, const std::vector<IdealEdge>& family);

/// Label-preserving isomorphism h mapping each circle (j, i) onto circle
/// (j, i) with h o phi1 conjugate to phi2 on all generators simultaneously.
std::optional<GraphIsomorphism> marked_equivalence(const MarkedAGraph& a, const MarkedAGraph& b);

struct SpineBall {
    std::vector<MarkedAGraph> vertices;
    std::vector<TypeKey> types;
    std::vector<int> orbit;  ///< indices of the orbit points of the base
    Poset poset;
    SimplicialComplex complex;
    /// Subposet on vertices without separating edges.
    Poset reduced_poset;
    SimplicialComplex reduced_complex;
};
/// Orbit of the base under words of length <= radius in gens and their
/// inverses, together with every blow-up in the stars of the orbit points
/// when radius >= 1, ordered by marked forest collapse.
SpineBall spine_ball(const MarkedAGraph& base, const std::vector<Automorphism>& gens, int radius);

}  // namespace relspine
