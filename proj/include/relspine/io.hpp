#pragma once

// JSON and DOT serialization for graphs, complexes, homology and
// automorphisms, plus atomic file output.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "relspine/complex.hpp"
#include "relspine/free_group.hpp"
#include "relspine/graph.hpp"
#include "relspine/marked.hpp"
#include "relspine/metric.hpp"

namespace relspine {

using Json = nlohmann::ordered_json;

/// A graph file: the A-graph, plus a marking and edge lengths when present.
/// Edge e is the pair of darts whose smaller input id is the e-th smallest.
struct GraphFile {
    AGraph graph;
    std::optional<MarkedAGraph> marked;
    std::optional<std::vector<double>> lengths;
};

Json graph_to_json(const AGraph& g);
Json graph_to_json(const MarkedAGraph& m, const std::vector<double>* lengths = nullptr);
/// Throws InputError naming the JSON pointer of the offending field.
GraphFile graph_from_json(const Json& j);
/// Parse errors report the byte offset.
Json parse_json(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);
GraphFile read_graph_file(const std::string& path);
MetricGraph metric_from_file(const GraphFile& f);

std::string to_dot(const AGraph& g, const std::string& name = "G");
std::string hasse_dot(const Poset& p, const std::string& name = "P");

Json complex_to_json(const SimplicialComplex& c);
SimplicialComplex complex_from_json(const Json& j);
Json homology_to_json(const Homology& h);

Json automorphism_to_json(const Automorphism& f);
/// {"n":..,"s":[..],"images":{"x1":"y1_1 x1",...}}; missing generators are fixed.
Automorphism automorphism_from_json(const Json& j);
Json path_to_json(const DartPath& p);

/// Writes to a sibling temporary file and renames it over path.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace relspine
