#pragma once

// Closed-form dimension counts for a rank n free group with factor ranks s.

#include <optional>
#include <string>
#include <vector>

#include "relspine/free_group.hpp"

namespace relspine {

struct FactorSignature {
    int n = 0;
    std::vector<int> s;
    std::optional<int> c;  ///< component count for the maximal relative spine graph

    int k() const { return static_cast<int>(s.size()); }
    int m() const;
    int sum() const;
    /// Sum over the factors of rank >= 2.
    int sum_nontrivial() const;
    BasisSpec basis() const { return BasisSpec(n, s); }
};

/// Parses "2,2" style factor lists; the empty string is k = 0.
std::vector<int> parse_factor_list(const std::string& text);
std::string signature_name(const FactorSignature& sig);

/// Throws InputError with a diagnostic: s(i) >= 1, Σs <= n, n >= 2,
/// 1 <= c <= k and c = 1 when n = Σs.
void validate_signature(const FactorSignature& sig);

/// Needs k >= 1.
int vcd(const FactorSignature& sig);
/// Needs k >= 1.
int dim_small_spine(const FactorSignature& sig);
int dim_relative_spine(const FactorSignature& sig);
int dim_cv(const FactorSignature& sig);

struct GraphCounts {
    int V = 0;
    int E = 0;
};
/// Maximal graph of the small spine, or of the relative spine with c
/// components of wedge cycles when sig.c is set. Throws InputError when the
/// edge count is not an integer or V - E != 1 - n.
GraphCounts max_graph_counts(const FactorSignature& sig);

struct FormulaRow {
    FactorSignature sig;
    std::optional<int> vcd, dimS, dimD;
    int dimCV = 0;
    GraphCounts counts;
};
FormulaRow formula_row(const FactorSignature& sig);
/// Every signature with 2 <= n <= n_max and factor ranks in [1, s_max],
/// factors non-increasing.
std::vector<FormulaRow> formula_table(int n_max, int s_max);
std::string formula_csv(const std::vector<FormulaRow>& rows);

}  // namespace relspine
