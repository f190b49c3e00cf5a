#include "relspine/formulas.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "relspine/errors.hpp"

namespace relspine {

int FactorSignature::m() const { return static_cast<int>(std::count(s.begin(), s.end(), 1)); }
int FactorSignature::sum() const { return std::accumulate(s.begin(), s.end(), 0); }
int FactorSignature::sum_nontrivial() const { return sum() - m(); }

std::vector<int> parse_factor_list(const std::string& text)
{
    std::vector<int> out;
    if (text.empty()) return out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw InputError("bad factor rank '" + item + "'");
        }
        if (used != item.size()) throw InputError("bad factor rank '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::string signature_name(const FactorSignature& sig)
{
    std::string s = "(" + std::to_string(sig.n) + ",(";
    for (std::size_t i = 0; i < sig.s.size(); ++i) s += (i ? "," : "") + std::to_string(sig.s[i]);
    return s + "))";
}

void validate_signature(const FactorSignature& sig)
{
    for (int r : sig.s)
        if (r < 1) throw InputError("factor ranks must be positive in " + signature_name(sig));
    if (sig.sum() > sig.n) throw InputError("factor ranks exceed n in " + signature_name(sig));
    if (sig.n < 2)
        throw InputError("degenerate signature " + signature_name(sig) + ": rank 1 has no graph with all valences >= 3");
    if (sig.c) {
        if (sig.k() == 0 || *sig.c < 1 || *sig.c > sig.k()) throw InputError("component count c must lie in [1, k]");
        if (sig.n == sig.sum() && *sig.c != 1) throw InputError("c must be 1 when n equals the factor rank sum");
    }
}

namespace {

void need_factors(const FactorSignature& sig, const char* what)
{
    validate_signature(sig);
    if (sig.k() == 0) throw InputError(std::string(what) + " needs at least one factor");
}

}  // namespace

int vcd(const FactorSignature& sig)
{
    need_factors(sig, "vcd");
    return 2 * sig.n - 2 * sig.sum() + 2 * sig.k() - 2 - sig.m();
}

int dim_small_spine(const FactorSignature& sig)
{
    need_factors(sig, "dim_small_spine");
    return 2 * sig.n + 2 * sig.k() - 2 * sig.sum_nontrivial() - 3 * sig.m() - 2;
}

int dim_relative_spine(const FactorSignature& sig)
{
    validate_signature(sig);
    if (sig.n > sig.sum()) return 2 * sig.n + 3 * sig.k() - 2 * sig.sum() - 3 - sig.m();
    return 2 * sig.n + 2 * sig.k() - 2 * sig.sum() - 2 - sig.m();
}

int dim_cv(const FactorSignature& sig)
{
    validate_signature(sig);
    if (sig.n > sig.sum()) return 3 * sig.n + 3 * sig.k() - 3 * sig.sum() - 4 - sig.m();
    return 3 * sig.n + 2 * sig.k() - 3 * sig.sum() - 2 - sig.m();
}

GraphCounts max_graph_counts(const FactorSignature& sig)
{
    validate_signature(sig);
    const int n = sig.n, k = sig.k(), m = sig.m(), sp = sig.sum_nontrivial();
    int V = 0, twice_e = 0;
    if (sig.c) {
        const int c = *sig.c;
        V = 2 * n + 2 * k + c - 2 * sp - 3 * m - 2;
        twice_e = 3 * V - 2 * k - c + 3 * m + 2 * sp;
    } else {
        V = 2 * n + 3 * k - 2 * sp - 3 * m - 2;
        twice_e = 3 * V - 3 * k + 3 * m + 2 * sp;
    }
    if (V < 1) throw InputError("infeasible signature " + signature_name(sig) + ": vertex count " + std::to_string(V));
    if (twice_e % 2 != 0) throw InputError("infeasible signature " + signature_name(sig) + ": non-integer edge count");
    const GraphCounts out{V, twice_e / 2};
    if (out.V - out.E != 1 - n)
        throw InputError("infeasible signature " + signature_name(sig) + ": V - E = " + std::to_string(out.V - out.E));
    return out;
}

FormulaRow formula_row(const FactorSignature& sig)
{
    FormulaRow row;
    row.sig = sig;
    validate_signature(sig);
    if (sig.k() > 0) {
        row.vcd = vcd(sig);
        row.dimD = dim_small_spine(sig);
    }
    row.dimS = dim_relative_spine(sig);
    row.dimCV = dim_cv(sig);
    row.counts = max_graph_counts(sig);
    return row;
}

std::vector<FormulaRow> formula_table(int n_max, int s_max)
{
    if (n_max < 2 || s_max < 1) throw InputError("table needs n_max >= 2 and s_max >= 1");
    std::vector<FormulaRow> rows;
    for (int n = 2; n <= n_max; ++n) {
        std::vector<int> s;
        std::function<void(int, int)> grow = [&](int left, int top) {
            rows.push_back(formula_row({n, s, std::nullopt}));
            for (int r = std::min(top, left); r >= 1; --r) {
                s.push_back(r);
                grow(left - r, r);
                s.pop_back();
            }
        };
        grow(n, s_max);
    }
    return rows;
}

std::string formula_csv(const std::vector<FormulaRow>& rows)
{
    auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
    std::string out = "signature,vcd,dimS,dimD,dimCV,V,E\n";
    for (const auto& r : rows)
        out += "\"" + signature_name(r.sig) + "\"," + opt(r.vcd) + "," + opt(r.dimS) + "," + opt(r.dimD) + "," +
               std::to_string(r.dimCV) + "," + std::to_string(r.counts.V) + "," + std::to_string(r.counts.E) + "\n";
    return out;
}

}  // namespace relspine
