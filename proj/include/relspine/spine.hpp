#pragma once

// Type-level spine: the forest-collapse poset of A-graph types, the small
// spine, vertex links, the poset-retraction harness and stars of roses.

#include <optional>
#include <vector>

#include "relspine/complex.hpp"
#include "relspine/enumerate.hpp"
#include "relspine/graph.hpp"

namespace relspine {

struct TypePoset {
    Poset poset;                ///< elements are canonical keys
    std::vector<AGraph> types;  ///< aligned with poset elements
};

/// x < y iff some forest collapse of y has type x. Collapses leaving the
/// given set are ignored.
TypePoset collapse_poset(std::vector<AGraph> types, bool pre_agraph = false, bool parallel = true);
TypePoset collapse_poset(const BasisSpec& basis, const EnumerationOptions& options = {});

/// Wedge cycles pairwise disjoint.
bool is_small(const AGraph& g);
TypePoset small_spine(const TypePoset& p);

struct LinkComplexes {
    std::vector<IdealEdge> ideal;
    std::vector<IdealEdge> legal;
    SimplicialComplex B;  ///< clique complex of compatibility on all ideal edges
    SimplicialComplex L;  ///< induced on legal ideal edges
};
LinkComplexes link_complexes(const AGraph& g, Vertex v);

struct RetractReport {
    bool maps_into = true;
    bool monotone = true;
    bool below = true;  ///< f(x) <= x everywhere
    std::optional<std::pair<int, int>> witness;  ///< offending pair (x, y) or (x, f(x))
    std::vector<int> image;
    Homology source;
    Homology target;
    bool homology_preserved = false;
    bool passed() const { return maps_into && monotone && below && homology_preserved; }
};
/// Checks that f (element indices) is monotone with f(x) <= x, and compares homology of
/// the order complexes of p and f(p).
RetractReport poset_retract(const Poset& p, const std::vector<int>& f);

struct StarOfRose {
    std::vector<IdealEdge> legal;
    std::vector<std::vector<int>> families;  ///< indices into legal, sorted
    std::vector<TypeKey> blowups;            ///< type of each family's blow-up
    Poset poset;                             ///< inclusion of families
    int max_family = 0;
    std::vector<Face> maximal_families;      ///< indices into legal
};
/// Compatible families of legal ideal edges whose blow-up is an A-graph
/// (a pre-A-graph with pre_agraph, where legal means the single blow-up is
/// one). The input must have a single vertex; throws InputError otherwise.
StarOfRose star_of_rose(const AGraph& rose, bool pre_agraph = false);

}  // namespace relspine
