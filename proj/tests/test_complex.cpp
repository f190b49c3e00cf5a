#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "doctest.h"
#include "relspine/complex.hpp"
#include "relspine/errors.hpp"

using namespace relspine;

namespace {

SimplicialComplex named(int n, std::vector<Face> faces)
{
    std::vector<std::string> v;
    for (int i = 0; i < n; ++i) v.push_back(std::to_string(i));
    return SimplicialComplex(v, std::move(faces));
}

SimplicialComplex rp2()
{
    return named(6, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5}, {1, 2, 4}, {2, 3, 5}, {1, 3, 5}, {1, 3, 4}, {2, 4, 5}});
}

SimplicialComplex torus()
{
    std::vector<Face> f;
    for (int i = 0; i < 7; ++i) {
        Face a{i, (i + 1) % 7, (i + 3) % 7}, b{i, (i + 2) % 7, (i + 3) % 7};
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        f.push_back(a);
        f.push_back(b);
    }
    return named(7, f);
}

SimplicialComplex random_complex(std::mt19937_64& rng, int n)
{
    std::vector<Face> faces;
    std::uniform_int_distribution<int> count(1, 10), dim(0, 3);
    for (int i = 0, c = count(rng); i < c; ++i) {
        Face f;
        std::vector<int> v(static_cast<std::size_t>(n));
        std::iota(v.begin(), v.end(), 0);
        std::shuffle(v.begin(), v.end(), rng);
        f.assign(v.begin(), v.begin() + dim(rng) + 1);
        std::sort(f.begin(), f.end());
        faces.push_back(f);
    }
    return named(n, faces);
}

// Homology from dense Smith forms of boundary matrices built here.
Homology dense_homology(const SimplicialComplex& c)
{
    const int top = c.dimension();
    std::vector<std::vector<long long>> inv(static_cast<std::size_t>(top + 2));
    for (int d = 1; d <= top; ++d) {
        auto lower = c.faces(d - 1), upper = c.faces(d);
        std::map<Face, std::size_t> idx;
        for (std::size_t i = 0; i < lower.size(); ++i) idx[lower[i]] = i;
        std::vector<std::vector<long long>> m(lower.size(), std::vector<long long>(upper.size(), 0));
        for (std::size_t j = 0; j < upper.size(); ++j)
            for (std::size_t k = 0; k < upper[j].size(); ++k) {
                Face f = upper[j];
                f.erase(f.begin() + static_cast<std::ptrdiff_t>(k));
                m[idx.at(f)][j] = k % 2 ? -1 : 1;
            }
        inv[static_cast<std::size_t>(d)] = smith_invariants(m);
    }
    Homology h;
    for (int d = 0; d <= top; ++d) {
        const auto& out = inv[static_cast<std::size_t>(d)];
        const auto& in = inv[static_cast<std::size_t>(d + 1)];
        h.betti.push_back(static_cast<long long>(c.faces(d).size()) - static_cast<long long>(out.size() + in.size()));
        std::vector<long long> t;
        for (long long x : in)
            if (x > 1) t.push_back(x);
        if (!t.empty()) h.torsion.emplace_back(d, t);
    }
    return h;
}

}  // namespace

TEST_CASE("standard surfaces")
{
    auto sphere = named(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
    CHECK(homology(sphere).betti == std::vector<long long>{1, 0, 1});
    auto p = homology(rp2());
    CHECK(p.betti == std::vector<long long>{1, 0, 0});
    REQUIRE(p.torsion.size() == 1);
    CHECK(p.torsion[0].first == 1);
    CHECK(p.torsion[0].second == std::vector<long long>{2});
    CHECK(homology(torus()).betti == std::vector<long long>{1, 2, 1});
    CHECK(rational_betti(rp2()) == std::vector<long long>{1, 0, 0});
    CHECK(torus().f_vector() == std::vector<long long>{7, 21, 14});
}

TEST_CASE("sparse homology equals dense Smith forms and the rational ranks")
{
    std::mt19937_64 rng(23);
    for (int t = 0; t < 40; ++t) {
        auto c = random_complex(rng, 9);
        auto h = homology(c);
        CHECK(h == dense_homology(c));
        CHECK(h == homology(c, false));
        CHECK(h.betti == rational_betti(c));
    }
    CHECK(homology(rp2()) == dense_homology(rp2()));
    CHECK(homology(torus()) == dense_homology(torus()));
}

TEST_CASE("smith invariants of a small matrix")
{
    CHECK(smith_invariants({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}) == std::vector<long long>{2, 6, 12});
}

TEST_CASE("order complex of a chain is a simplex")
{
    Poset p({"a", "b", "c"}, {{0, 1}, {1, 2}});
    auto oc = order_complex(p);
    CHECK(oc.dimension() == 2);
    CHECK(oc.maximal_faces().size() == 1);
    CHECK(p.covers().size() == 2);
    CHECK(p.less(0, 2));
    CHECK_THROWS_AS(Poset({"a", "b"}, {{0, 1}, {1, 0}}), InputError);
}

TEST_CASE("greedy collapse")
{
    CHECK(collapse_greedy(named(4, {{0, 1, 2, 3}})).collapsible);
    CHECK(collapse_greedy(named(3, {{0, 1}, {1, 2}})).collapsible);
    auto t = collapse_greedy(torus());
    CHECK_FALSE(t.collapsible);
    CHECK_FALSE(collapse_greedy(named(3, {{0, 1}, {1, 2}, {0, 2}})).collapsible);
}

TEST_CASE("clique complex of a 4-cycle")
{
    std::vector<std::vector<bool>> adj(4, std::vector<bool>(4, false));
    for (int i = 0; i < 4; ++i) adj[static_cast<std::size_t>(i)][static_cast<std::size_t>((i + 1) % 4)] = adj[static_cast<std::size_t>((i + 1) % 4)][static_cast<std::size_t>(i)] = true;
    auto c = clique_complex({"a", "b", "c", "d"}, adj);
    CHECK(homology(c).betti == std::vector<long long>{1, 1});
}
