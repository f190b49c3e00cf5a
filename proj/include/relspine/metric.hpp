#pragma once

// Metric A-graphs, length functions, maps linear on edges and their
// Lipschitz constants, turns, optimality and rose-level minset checks.

#include <compare>
#include <optional>
#include <utility>
#include <vector>

#include "relspine/free_group.hpp"
#include "relspine/graph.hpp"
#include "relspine/marked.hpp"

namespace relspine {

inline constexpr double stretch_tolerance = 1e-9;

struct MetricGraph {
    MarkedAGraph marked;
    std::vector<double> lengths;  ///< per edge
    const AGraph& agraph() const { return marked.graph; }
    const Graph& graph() const { return marked.graph.graph; }
};

/// Scales each circle to total length 1 and, when n > Σs, the edges outside
/// every circle to total length 1. Throws InputError on a nonpositive length.
std::vector<double> normalize(const AGraph& g, std::vector<double> raw);
bool is_normalized(const AGraph& g, const std::vector<double>& lengths, double tol = 1e-12);

/// Dimension of the open polysimplex of g: Σ(N_ij - 1) over circles plus
/// N - 1 for the N edges outside the circles (N when n = Σs, where no volume
/// constraint applies).
int polysimplex_dim(const AGraph& g);

double path_length(const std::vector<double>& lengths, const DartPath& p);
/// Strips d ... reverse(d) from the ends of a reduced closed path.
DartPath cyclic_reduce_path(const DartPath& p);
/// Image of a word under the marking as a reduced closed path at the base.
DartPath realize_word(const MarkedAGraph& m, const Word& w);
/// Length of the cyclically reduced representative of phi(w). Throws on the
/// trivial word.
double loop_length(const MetricGraph& g, const Word& w);

/// Test words y_i, y_i y_l, y_i y_l^-1 (i < l) of one factor, in that order.
std::vector<Word> f_vector_words(const BasisSpec& basis, int factor);
/// Entries n * l(w) over f_vector_words.
std::vector<double> f_vector(const MetricGraph& rose, int factor);
/// Concatenated blocks j = 1..k.
std::vector<double> f_vector(const MetricGraph& rose);
/// Lexicographic with entries equal within tol.
std::weak_ordering lex_compare(const std::vector<double>& a, const std::vector<double>& b, double tol = stretch_tolerance);

/// A map linear on edges. edge_images[e] is the reduced image of dart 2e.
struct GraphMap {
    MetricGraph source;
    MetricGraph target;
    std::vector<Vertex> vertex_map;
    std::vector<DartPath> edge_images;
    DartPath image(Dart d) const;
    /// Image of a path, freely reduced.
    DartPath image(const DartPath& p) const;
};
std::vector<std::string> validate_map(const GraphMap& f);

/// A map f with f o phi_source homotopic to phi_target: every vertex goes to
/// the target base, spanning tree edges collapse, and for roses a common
/// conjugating prefix is stripped so images are cyclically tight.
GraphMap comparison_map(const MetricGraph& source, const MetricGraph& target);

/// Image length of edge e over its length.
double edge_stretch(const GraphMap& f, EdgeId e);
/// max edge_stretch: the Lipschitz constant of the map itself.
double map_lipschitz(const GraphMap& f);
/// Tightened image length over length, for a cyclically reduced loop.
double loop_stretch(const GraphMap& f, const DartPath& loop);

struct LipschitzResult {
    double value = 0;
    DartPath witness;
};
enum class Candidates { cycles_and_figure_eights, with_barbells };
/// Candidate loops in the source: embedded cycles, embedded figure eights
/// traversed both ways, and optionally barbells.
std::vector<DartPath> candidate_loops(const Graph& g, Candidates which);
LipschitzResult lipschitz(const GraphMap& f, Candidates which = Candidates::with_barbells, bool parallel = true);
/// Max over all cyclically reduced loops with at most max_darts darts
/// (default 2 E).
LipschitzResult brute_force_lipschitz(const GraphMap& f, int max_darts = -1);

/// Edges stretched by map_lipschitz within tolerance.
std::vector<EdgeId> max_stretch_subgraph(const GraphMap& f);

using Turn = std::pair<Dart, Dart>;  ///< sorted; degenerate when equal
struct TurnAnalysis {
    std::vector<Dart> Df;             ///< first dart of each dart's image
    std::vector<std::pair<Turn, Turn>> Tf;
    std::vector<Turn> illegal;
    bool self_map = false;            ///< iterates taken only for self-maps
};
/// Throws InputError if some edge is collapsed.
TurnAnalysis turn_analysis(const GraphMap& f);
std::vector<Turn> turns_of_loop(const DartPath& loop);

struct OptimalityReport {
    bool optimal = true;
    std::optional<Vertex> offending;
    std::vector<EdgeId> gamma_f;
};
/// Fails at a vertex of Γ_f whose Γ_f darts all share their first image dart.
OptimalityReport is_optimal(const GraphMap& f);

struct MinsetReport {
    int rank = 0;
    int bound = 0;
    std::size_t competitors = 0;
    std::vector<double> unit_vector;
    bool minimal = true;
    std::size_t ties = 0;
    std::optional<Automorphism> violation;   ///< competitor beating the unit rose
    std::optional<Automorphism> worst;       ///< lex-smallest non-tied competitor
    std::vector<double> worst_vector;
    bool ties_isometric = true;               ///< Lip 1, Γ_f whole, no illegal turns
    bool passed() const { return minimal && ties_isometric; }
};
/// Automorphisms of F_rank that are products of at most bound Nielsen moves,
/// deduplicated by image tuple. The identity comes first.
std::vector<Automorphism> nielsen_ball(int rank, int bound);
/// The unit rose against every rose (R, id o psi) for psi in nielsen_ball.
MinsetReport minset_check(int rank, int bound);

}  // namespace relspine
