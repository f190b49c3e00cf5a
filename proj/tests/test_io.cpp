#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "relspine/errors.hpp"
#include "relspine/io.hpp"

using namespace relspine;

TEST_CASE("graph json round trip")
{
    for (auto [n, s] : {std::pair{3, std::vector<int>{2}}, std::pair{4, std::vector<int>{2, 2}}}) {
        for (const auto& t : enumerate_agraph_types(BasisSpec(n, s)).types) {
            auto back = graph_from_json(graph_to_json(t));
            CHECK(canonical_form(back.graph) == canonical_form(t));
            CHECK_FALSE(back.marked.has_value());
        }
    }
}

TEST_CASE("marked metric round trip")
{
    auto m = marked_rose(BasisSpec(3, {2}));
    std::vector<double> l{0.5, 0.5, 1.0};
    auto j = graph_to_json(m, &l);
    auto back = graph_from_json(parse_json(j.dump(), "test"));
    REQUIRE(back.marked.has_value());
    REQUIRE(back.lengths.has_value());
    CHECK(*back.lengths == l);
    CHECK(back.marked->images == m.images);
    auto mg = metric_from_file(back);
    CHECK(mg.lengths == l);
}

TEST_CASE("malformed input names the field")
{
    auto j = graph_to_json(rose(BasisSpec(2, {1})));
    j["darts"][0]["reverse"] = 7;
    try {
        graph_from_json(j);
        FAIL("no error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("/darts") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_json("{\"n\": ", "x"), InputError);
}

TEST_CASE("automorphism and complex json")
{
    BasisSpec b(3, {2});
    auto images = Automorphism::identity(b).images();
    images[2] = Word{3, 1};
    Automorphism f(b, images);
    CHECK(automorphism_from_json(automorphism_to_json(f)) == f);
    auto partial = Json::parse(R"({"n":3,"s":[2],"images":{"x1":"x1 y1_1"}})");
    CHECK(automorphism_from_json(partial) == f);

    SimplicialComplex c({"a", "b", "c"}, {{0, 1}, {1, 2}});
    auto back = complex_from_json(complex_to_json(c));
    CHECK(back.vertices() == c.vertices());
    CHECK(back.maximal_faces() == c.maximal_faces());
    auto h = homology_to_json(homology(c));
    CHECK(h["betti"] == Json::parse("[1,0]"));
}

TEST_CASE("dot output")
{
    auto dot = to_dot(fixtures::contra1());
    CHECK(dot.find("graph") != std::string::npos);
    Poset p({"a", "b"}, {{0, 1}});
    CHECK(hasse_dot(p).find("->") != std::string::npos);
}

TEST_CASE("atomic write")
{
    auto dir = std::filesystem::temp_directory_path() / "relspine_io_test";
    std::filesystem::remove_all(dir);
    auto path = (dir / "sub" / "out.txt").string();
    write_file_atomic(path, "one");
    write_file_atomic(path, "two");
    std::ifstream in(path);
    std::string s;
    in >> s;
    CHECK(s == "two");
    std::filesystem::remove_all(dir);
}
