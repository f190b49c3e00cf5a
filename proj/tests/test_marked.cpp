#include <random>

#include "doctest.h"
#include "relspine/errors.hpp"
#include "relspine/marked.hpp"
#include "relspine/metric.hpp"
#include "relspine/spine.hpp"

using namespace relspine;

namespace {

std::vector<Automorphism> dihedral(const BasisSpec& b)
{
    return {Automorphism(b, {Word{1}, Word{1, 2}}), Automorphism(b, {Word{1}, Word{-2}})};
}

}  // namespace

TEST_CASE("rose marking is valid")
{
    for (auto [n, s] : {std::pair{2, std::vector<int>{1}}, std::pair{4, std::vector<int>{2, 2}}}) {
        auto m = marked_rose(BasisSpec(n, s));
        CHECK(validate_marking(m).empty());
    }
}

TEST_CASE("fundamental group words")
{
    Graph theta(2, {});
    for (int i = 0; i < 3; ++i) theta.add_edge(0, 1);
    FundamentalGroup pi(theta, 0);
    CHECK(pi.basis().rank() == 2);
    int tree = 0;
    for (EdgeId e = 0; e < 3; ++e) tree += pi.in_tree(e);
    CHECK(tree == 1);
    auto m = standard_marking(theta, 1);
    CHECK(validate_marking(m).empty());
    for (std::size_t g = 0; g < m.images.size(); ++g) CHECK(pi.word(m.images[g]).length() == 1);
}

TEST_CASE("the action needs relative automorphisms")
{
    BasisSpec b(3, {2});
    auto m = marked_rose(b);
    auto images = Automorphism::identity(b).images();
    images[2] = Word{3, 1};
    auto moved = act(m, Automorphism(b, images));
    CHECK(validate_marking(moved).empty());
    CHECK_FALSE(marked_equivalence(m, moved).has_value());
    CHECK(marked_equivalence(m, act(m, Automorphism::conjugation(b, Word{2, 3}))).has_value());
    images = Automorphism::identity(b).images();
    images[0] = Word{1, 3};
    CHECK_THROWS_AS(act(m, Automorphism(b, images)), InputError);
}

TEST_CASE("action composes")
{
    BasisSpec b(2, {1});
    auto m = marked_rose(b);
    auto g = dihedral(b);
    auto lhs = act(act(m, g[0]), g[1]);
    auto rhs = act(m, compose(g[0], g[1]));
    CHECK(marked_equivalence(lhs, rhs).has_value());
}

TEST_CASE("blow up then collapse keeps the marked point")
{
    BasisSpec b(3, {2});
    auto m = marked_rose(b);
    for (const auto& e : ideal_edges_at(m.graph, 0)) {
        if (!is_legal(m.graph, e)) continue;
        auto up = blow_up(m, 0, {e});
        CHECK(validate_marking(up).empty());
        std::vector<EdgeId> forest{up.graph.graph.num_edges() - 1};
        auto down = collapse(up, forest);
        CHECK(marked_equivalence(down, m).has_value());
    }
}

TEST_CASE("ball around the rose under the infinite dihedral group")
{
    BasisSpec b(2, {1});
    auto ball0 = spine_ball(marked_rose(b), dihedral(b), 0);
    CHECK(ball0.vertices.size() == 1);
    auto ball = spine_ball(marked_rose(b), dihedral(b), 2);
    CHECK(ball.vertices.size() == 16);
    CHECK(ball.orbit.size() == 5);
    CHECK(ball.complex.f_vector() == std::vector<long long>{16, 15});
    CHECK(ball.reduced_complex.f_vector() == std::vector<long long>{11, 10});
    for (const auto& v : ball.vertices) CHECK(validate_marking(v).empty());
    CHECK(is_acyclic(homology(ball.reduced_complex)));
}
