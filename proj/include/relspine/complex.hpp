#pragma once

// Finite posets, abstract simplicial complexes, integral homology and greedy
// collapsibility.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace relspine {

class Poset {
public:
    Poset() = default;
    /// Transitive closure of the pairs (a, b) meaning a < b. Throws InputError on a cycle.
    Poset(std::vector<std::string> elements, const std::vector<std::pair<int, int>>& relations);

    int size() const { return static_cast<int>(elements_.size()); }
    const std::vector<std::string>& elements() const { return elements_; }
    bool less(int a, int b) const { return less_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
    bool less_equal(int a, int b) const { return a == b || less(a, b); }
    /// Covering pairs (a, b): a < b with nothing strictly between.
    std::vector<std::pair<int, int>> covers() const;
    Poset induced(const std::vector<int>& subset) const;
    int index_of(const std::string& key) const;  ///< -1 when absent

private:
    std::vector<std::string> elements_;
    std::vector<std::vector<bool>> less_;
};

using Face = std::vector<int>;  ///< sorted vertex indices

class SimplicialComplex {
public:
    SimplicialComplex() = default;
    /// Keeps the inclusion-maximal faces of the given generating faces.
    SimplicialComplex(std::vector<std::string> vertices, std::vector<Face> faces);

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<Face>& maximal_faces() const { return maximal_; }
    bool empty() const { return maximal_.empty(); }
    /// Throws InputError on the empty complex.
    int dimension() const;
    /// Every nonempty face of the given dimension, sorted.
    std::vector<Face> faces(int dim) const;
    std::vector<long long> f_vector() const;

private:
    std::vector<std::string> vertices_;
    std::vector<Face> maximal_;
};

/// Faces are the chains of the poset.
SimplicialComplex order_complex(const Poset& p);

/// Faces are the vertex sets that are pairwise adjacent (clique complex).
SimplicialComplex clique_complex(std::vector<std::string> vertices, const std::vector<std::vector<bool>>& adjacent);

struct Homology {
    std::vector<long long> betti;
    /// (degree, invariant factors > 1)
    std::vector<std::pair<int, std::vector<long long>>> torsion;
    bool operator==(const Homology&) const = default;
};

/// Integral homology from Smith normal forms of the boundary maps. With
/// parallel = true the boundary maps are reduced concurrently.
Homology homology(const SimplicialComplex& c, bool parallel = true);
/// Betti numbers from ranks of the boundary maps over the rationals.
std::vector<long long> rational_betti(const SimplicialComplex& c);
/// Homology of a point: betti (1) and no torsion.
bool is_acyclic(const Homology& h);

/// Invariant factors (nonzero diagonal of the Smith normal form).
std::vector<long long> smith_invariants(std::vector<std::vector<long long>> matrix);

struct CollapseReport {
    bool collapsible = false;
    /// Elementary collapses (free face, unique proper coface).
    std::vector<std::pair<Face, Face>> sequence;
    /// Maximal faces left when no free face remains.
    std::vector<Face> remainder;
};
/// Greedy elementary collapses. Success certifies contractibility; failure
/// certifies nothing.
CollapseReport collapse_greedy(const SimplicialComplex& c);

}  // namespace relspine
