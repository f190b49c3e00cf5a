#pragma once

// Exhaustive enumeration of (A,n)-graph isomorphism types.

#include <optional>
#include <vector>

#include "relspine/graph.hpp"

namespace relspine {

/// Edge bound from the rank and factor data: 3n+3k-2Σs-3-m when n > Σs,
/// 3n+2k-2Σs-2-m when n = Σs. Used for the size guard.
int stated_edge_bound(const BasisSpec& basis);

/// Search cap from valence counting: every vertex has valence at least 3 and
/// the base of a wedge with s(j) >= 2 at least 2s(j), so E <= 3n-3 - Σ(2s(j)-3).
/// Equals the stated bound when n > Σs and exceeds it when n = Σs, where
/// graphs with separating edges can be larger.
int search_edge_cap(const BasisSpec& basis);

struct EnumerationOptions {
    std::optional<int> edge_cap;  ///< override of search_edge_cap
    bool reduced = false;         ///< drop graphs with separating edges
    bool force = false;           ///< ignore the size guard
    int guard = 9;                ///< refuse when stated_edge_bound exceeds this
    bool parallel = true;
};

struct EnumerationResult {
    std::vector<AGraph> types;  ///< sorted by (edge count, key)
    std::vector<TypeKey> keys;
    int edge_cap = 0;
    long long labelled_multigraphs = 0;
    long long multigraph_types = 0;
};

/// Throws InputError when the guard refuses the signature.
EnumerationResult enumerate_agraph_types(const BasisSpec& basis, const EnumerationOptions& options = {});

/// Connected multigraphs with every valence >= 3, V vertices and E edges,
/// one per labelled edge multiset with non-increasing degree sequence.
std::vector<Graph> labelled_multigraphs(int num_vertices, int num_edges);

/// Embedded cycles as closed dart paths starting at their smallest vertex.
std::vector<std::vector<Dart>> embedded_cycles(const Graph& g);

/// Every wedge-cycle system on g realizing the basis (axioms checked).
std::vector<AGraph> wedge_systems(const Graph& g, const BasisSpec& basis);

}  // namespace relspine
