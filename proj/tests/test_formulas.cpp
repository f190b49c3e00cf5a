#include <algorithm>

#include "doctest.h"
#include "relspine/enumerate.hpp"
#include "relspine/errors.hpp"
#include "relspine/formulas.hpp"
#include "relspine/spine.hpp"

using namespace relspine;

TEST_CASE("published values")
{
    CHECK(vcd({2, {1}, {}}) == 1);
    for (int n = 3; n <= 6; ++n) CHECK(vcd({n, std::vector<int>(static_cast<std::size_t>(n), 1), {}}) == n - 2);
    CHECK(vcd({4, {2, 2}, {}}) == 2);
    CHECK(dim_small_spine({4, {2, 2}, {}}) == 2);
    CHECK(dim_relative_spine({5, {2, 2}, {}}) == 5);
    CHECK(dim_cv({5, {2, 2}, {}}) == 5);
    for (int n = 2; n <= 5; ++n) {
        CHECK(dim_relative_spine({n, {}, {}}) == 2 * n - 3);
        CHECK(dim_cv({n, {}, {}}) == 3 * n - 4);
    }
}

TEST_CASE("both branches of the piecewise formulas")
{
    FactorSignature full{4, {2, 2}, {}}, free{5, {2, 2}, {}};
    CHECK(dim_relative_spine(full) == 2);
    CHECK(dim_relative_spine(free) == 5);
    CHECK(dim_cv(full) == 2);
    CHECK(free.m() == 0);
    CHECK(FactorSignature{4, {2, 1, 1}, {}}.m() == 2);
    CHECK(FactorSignature{4, {2, 1, 1}, {}}.sum_nontrivial() == 2);
}

TEST_CASE("vcd equals the witness rank")
{
    for (const auto& row : formula_table(6, 3))
        if (row.vcd) CHECK(*row.vcd == vcd_witness_rank(row.sig.basis()));
}

TEST_CASE("small spine graph counts match the largest enumerated small graph")
{
    for (auto [n, s] : {std::pair{4, std::vector<int>{2, 2}}, std::pair{3, std::vector<int>{1, 1}}, std::pair{3, std::vector<int>{2}}}) {
        FactorSignature sig{n, s, {}};
        auto counts = max_graph_counts(sig);
        CHECK(counts.V - counts.E == 1 - n);
        auto res = enumerate_agraph_types(sig.basis());
        int best = 0;
        for (const auto& t : res.types)
            if (is_small(t)) best = std::max(best, t.graph.num_edges());
        CHECK(counts.E == best);
    }
    auto c422 = max_graph_counts({4, {2, 2}, {}});
    CHECK(c422.V == 4);
    CHECK(c422.E == 7);
}

TEST_CASE("signature validation")
{
    CHECK_THROWS_AS(validate_signature({1, {1}, {}}), InputError);
    CHECK_THROWS_AS(validate_signature({3, {2, 2}, {}}), InputError);
    CHECK_THROWS_AS(validate_signature({3, {0}, {}}), InputError);
    CHECK_THROWS_AS(validate_signature({4, {2, 2}, 2}), InputError);
    CHECK_NOTHROW(validate_signature({5, {2, 2}, 2}));
    CHECK(parse_factor_list("2,2") == std::vector<int>{2, 2});
    CHECK(parse_factor_list("").empty());
    CHECK(signature_name({4, {2, 2}, {}}) == "(4,(2,2))");
}

TEST_CASE("table rows and csv")
{
    auto rows = formula_table(3, 2);
    bool k0 = false;
    for (const auto& r : rows)
        if (r.sig.k() == 0) {
            k0 = true;
            CHECK_FALSE(r.vcd.has_value());
            CHECK_FALSE(r.dimD.has_value());
        }
    CHECK(k0);
    auto csv = formula_csv(rows);
    CHECK(csv.rfind("signature,vcd,dimS,dimD,dimCV,V,E\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(rows.size()) + 1);
}
