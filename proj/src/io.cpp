#include "relspine/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "relspine/errors.hpp"

namespace relspine {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what)
{
    throw InputError("at " + (where.empty() ? std::string("/") : where) + ": " + what);
}

const Json& field(const Json& j, const std::string& where, const char* name)
{
    if (!j.is_object()) fail(where, "expected an object");
    const auto it = j.find(name);
    if (it == j.end()) fail(where, std::string("missing field '") + name + "'");
    return *it;
}

int as_int(const Json& j, const std::string& where)
{
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<int>();
}

std::vector<int> int_list(const Json& j, const std::string& where)
{
    if (!j.is_array()) fail(where, "expected an array");
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], where + "/" + std::to_string(i)));
    return out;
}

}  // namespace

Json path_to_json(const DartPath& p) { return Json(p); }

Json graph_to_json(const AGraph& g)
{
    Json j;
    j["n"] = g.basis.rank();
    j["s"] = g.basis.factor_ranks();
    Json vertices = Json::array();
    for (Vertex v = 0; v < g.graph.num_vertices(); ++v) vertices.push_back(v);
    j["vertices"] = vertices;
    Json darts = Json::array();
    for (Dart d = 0; d < g.graph.num_darts(); ++d)
        darts.push_back({{"id", d}, {"vertex", g.graph.origin(d)}, {"reverse", reverse_dart(d)}});
    j["darts"] = darts;
    Json wedges = Json::array();
    for (std::size_t w = 0; w < g.wedges.size(); ++w) {
        Json circles = Json::array();
        for (const auto& c : g.wedges[w].circles) circles.push_back(c);
        wedges.push_back({{"j", static_cast<int>(w) + 1}, {"base", g.wedges[w].base}, {"circles", circles}});
    }
    j["wedges"] = wedges;
    j["key"] = canonical_form(g);
    return j;
}

Json graph_to_json(const MarkedAGraph& m, const std::vector<double>* lengths)
{
    Json j = graph_to_json(m.graph);
    if (lengths) {
        Json l = Json::object();
        for (std::size_t e = 0; e < lengths->size(); ++e) l[std::to_string(e)] = (*lengths)[e];
        j["lengths"] = l;
    }
    Json images = Json::object();
    for (std::size_t g = 0; g < m.images.size(); ++g) images[m.graph.basis.generator_name(static_cast<int>(g))] = m.images[g];
    j["marking"] = {{"base", m.base}, {"images", images}};
    return j;
}

GraphFile graph_from_json(const Json& j)
{
    const int n = as_int(field(j, "", "n"), "/n");
    const auto s = j.contains("s") ? int_list(j["s"], "/s") : std::vector<int>{};
    BasisSpec basis;
    try {
        basis = BasisSpec(n, s);
    } catch (const InputError& e) {
        fail("/s", e.what());
    }
    const auto vertex_ids = int_list(field(j, "", "vertices"), "/vertices");
    std::map<int, int> vindex;
    for (std::size_t i = 0; i < vertex_ids.size(); ++i)
        if (!vindex.emplace(vertex_ids[i], static_cast<int>(i)).second) fail("/vertices/" + std::to_string(i), "duplicate vertex id");

    const Json& darts = field(j, "", "darts");
    if (!darts.is_array()) fail("/darts", "expected an array");
    std::map<int, std::pair<int, int>> dart_info;  // id -> (vertex index, reverse id)
    for (std::size_t i = 0; i < darts.size(); ++i) {
        const std::string at = "/darts/" + std::to_string(i);
        const int id = as_int(field(darts[i], at, "id"), at + "/id");
        const int v = as_int(field(darts[i], at, "vertex"), at + "/vertex");
        const int r = as_int(field(darts[i], at, "reverse"), at + "/reverse");
        const auto vi = vindex.find(v);
        if (vi == vindex.end()) fail(at + "/vertex", "unknown vertex " + std::to_string(v));
        if (!dart_info.emplace(id, std::make_pair(vi->second, r)).second) fail(at + "/id", "duplicate dart id");
    }
    std::map<int, Dart> remap;
    std::vector<Vertex> origin;
    for (const auto& [id, info] : dart_info) {
        if (remap.count(id)) continue;
        const auto other = dart_info.find(info.second);
        if (other == dart_info.end() || other->second.second != id || info.second == id)
            fail("/darts", "reverse of dart " + std::to_string(id) + " is not an involution partner");
        remap[id] = static_cast<Dart>(origin.size());
        origin.push_back(info.first);
        remap[info.second] = static_cast<Dart>(origin.size());
        origin.push_back(other->second.first);
    }
    GraphFile out;
    out.graph.graph = Graph(static_cast<int>(vertex_ids.size()), origin);
    out.graph.basis = basis;
    auto dart = [&](const Json& x, const std::string& at) {
        const int id = as_int(x, at);
        const auto it = remap.find(id);
        if (it == remap.end()) fail(at, "unknown dart " + std::to_string(id));
        return it->second;
    };
    auto vertex = [&](const Json& x, const std::string& at) {
        const int id = as_int(x, at);
        const auto it = vindex.find(id);
        if (it == vindex.end()) fail(at, "unknown vertex " + std::to_string(id));
        return it->second;
    };

    if (j.contains("wedges")) {
        const Json& wedges = j["wedges"];
        if (!wedges.is_array()) fail("/wedges", "expected an array");
        std::vector<std::optional<Wedge>> slots(static_cast<std::size_t>(basis.num_factors()));
        for (std::size_t w = 0; w < wedges.size(); ++w) {
            const std::string at = "/wedges/" + std::to_string(w);
            const int jj = as_int(field(wedges[w], at, "j"), at + "/j");
            if (jj < 1 || jj > basis.num_factors()) fail(at + "/j", "factor index out of range");
            if (slots[static_cast<std::size_t>(jj - 1)]) fail(at + "/j", "factor listed twice");
            Wedge wedge;
            wedge.base = vertex(field(wedges[w], at, "base"), at + "/base");
            const Json& circles = field(wedges[w], at, "circles");
            if (!circles.is_array()) fail(at + "/circles", "expected an array");
            for (std::size_t c = 0; c < circles.size(); ++c) {
                const std::string cat = at + "/circles/" + std::to_string(c);
                if (!circles[c].is_array()) fail(cat, "expected an array");
                std::vector<Dart> path;
                for (std::size_t d = 0; d < circles[c].size(); ++d) path.push_back(dart(circles[c][d], cat + "/" + std::to_string(d)));
                wedge.circles.push_back(path);
            }
            slots[static_cast<std::size_t>(jj - 1)] = wedge;
        }
        for (std::size_t w = 0; w < slots.size(); ++w) {
            if (!slots[w]) fail("/wedges", "no wedge for factor " + std::to_string(w + 1));
            out.graph.wedges.push_back(*slots[w]);
        }
    } else if (basis.num_factors() > 0) {
        fail("/wedges", "missing wedges for a basis with factors");
    }

    if (j.contains("lengths")) {
        const Json& l = j["lengths"];
        if (!l.is_object()) fail("/lengths", "expected an object keyed by edge id");
        std::vector<double> lengths(static_cast<std::size_t>(out.graph.graph.num_edges()), 0.0);
        std::vector<bool> seen(lengths.size(), false);
        for (const auto& [key, value] : l.items()) {
            const std::string at = "/lengths/" + key;
            int e = -1;
            try {
                std::size_t used = 0;
                e = std::stoi(key, &used);
                if (used != key.size()) e = -1;
            } catch (const std::exception&) {
            }
            if (e < 0 || e >= static_cast<int>(lengths.size())) fail(at, "unknown edge");
            if (!value.is_number()) fail(at, "expected a number");
            lengths[static_cast<std::size_t>(e)] = value.get<double>();
            seen[static_cast<std::size_t>(e)] = true;
        }
        for (std::size_t e = 0; e < seen.size(); ++e)
            if (!seen[e]) fail("/lengths", "no length for edge " + std::to_string(e));
        out.lengths = lengths;
    }

    if (j.contains("marking")) {
        const Json& mk = j["marking"];
        MarkedAGraph m;
        m.graph = out.graph;
        m.base = vertex(field(mk, "/marking", "base"), "/marking/base");
        const Json& images = field(mk, "/marking", "images");
        if (!images.is_object()) fail("/marking/images", "expected an object keyed by generator");
        m.images.assign(static_cast<std::size_t>(basis.rank()), {});
        std::vector<bool> seen(m.images.size(), false);
        for (const auto& [name, path] : images.items()) {
            const std::string at = "/marking/images/" + name;
            int g = -1;
            try {
                g = basis.generator_from_name(name);
            } catch (const InputError& e) {
                fail(at, e.what());
            }
            if (!path.is_array()) fail(at, "expected a dart array");
            for (std::size_t d = 0; d < path.size(); ++d) m.images[static_cast<std::size_t>(g)].push_back(dart(path[d], at + "/" + std::to_string(d)));
            seen[static_cast<std::size_t>(g)] = true;
        }
        for (std::size_t g = 0; g < seen.size(); ++g)
            if (!seen[g]) fail("/marking/images", "no image for " + basis.generator_name(static_cast<int>(g)));
        out.marked = m;
    }
    return out;
}

Json parse_json(const std::string& text, const std::string& source)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(source + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str(), path);
}

GraphFile read_graph_file(const std::string& path)
{
    try {
        return graph_from_json(read_json_file(path));
    } catch (const InputError& e) {
        const std::string what = e.what();
        if (what.starts_with(path)) throw;
        throw InputError(path + ": " + what);
    }
}

MetricGraph metric_from_file(const GraphFile& f)
{
    MetricGraph m;
    if (f.marked) {
        m.marked = *f.marked;
    } else if (f.graph.graph.num_vertices() == 1 || f.graph.basis.num_factors() == 0) {
        // Roses default to the identity marking; factor-free graphs to the standard one.
        if (f.graph.graph.num_vertices() == 1) {
            m.marked.graph = f.graph;
            for (EdgeId e = 0; e < f.graph.graph.num_edges(); ++e) m.marked.images.push_back({2 * e});
        } else {
            m.marked = standard_marking(f.graph.graph);
            m.marked.graph = f.graph;
        }
    } else {
        throw InputError("graph file has no marking");
    }
    m.lengths = f.lengths ? *f.lengths : std::vector<double>(static_cast<std::size_t>(f.graph.graph.num_edges()), 1.0);
    return m;
}

std::string to_dot(const AGraph& g, const std::string& name)
{
    static const char* palette[] = {"red", "blue", "darkgreen", "orange", "purple", "brown", "cyan", "magenta"};
    std::vector<int> wedge_of(static_cast<std::size_t>(g.graph.num_edges()), -1);
    for (std::size_t w = 0; w < g.wedges.size(); ++w)
        for (const auto& c : g.wedges[w].circles)
            for (Dart d : c) wedge_of[static_cast<std::size_t>(edge_of(d))] = static_cast<int>(w);
    std::ostringstream out;
    out << "graph \"" << name << "\" {\n  node [shape=circle];\n";
    for (Vertex v = 0; v < g.graph.num_vertices(); ++v) out << "  v" << v << " [label=\"" << v << "\"];\n";
    for (EdgeId e = 0; e < g.graph.num_edges(); ++e) {
        out << "  v" << g.graph.origin(2 * e) << " -- v" << g.graph.terminus(2 * e) << " [label=\"e" << e << "\"";
        const int w = wedge_of[static_cast<std::size_t>(e)];
        out << ", color=" << (w < 0 ? "black" : palette[static_cast<std::size_t>(w) % 8]) << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string hasse_dot(const Poset& p, const std::string& name)
{
    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n  rankdir=BT;\n";
    for (int i = 0; i < p.size(); ++i) out << "  p" << i << " [label=" << Json(p.elements()[static_cast<std::size_t>(i)]).dump() << "];\n";
    for (const auto& [a, b] : p.covers()) out << "  p" << a << " -> p" << b << ";\n";
    out << "}\n";
    return out.str();
}

Json complex_to_json(const SimplicialComplex& c)
{
    Json faces = Json::array();
    for (const auto& f : c.maximal_faces()) {
        Json face = Json::array();
        for (int v : f) face.push_back(c.vertices()[static_cast<std::size_t>(v)]);
        faces.push_back(face);
    }
    return {{"vertices", c.vertices()}, {"maximal_faces", faces}};
}

SimplicialComplex complex_from_json(const Json& j)
{
    const Json& vs = field(j, "", "vertices");
    if (!vs.is_array()) fail("/vertices", "expected an array");
    std::vector<std::string> names;
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string at = "/vertices/" + std::to_string(i);
        const std::string key = vs[i].is_string() ? vs[i].get<std::string>() : vs[i].dump();
        if (!index.emplace(key, static_cast<int>(i)).second) fail(at, "duplicate vertex");
        names.push_back(key);
    }
    const Json& fs = field(j, "", "maximal_faces");
    if (!fs.is_array()) fail("/maximal_faces", "expected an array");
    std::vector<Face> faces;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const std::string at = "/maximal_faces/" + std::to_string(i);
        if (!fs[i].is_array() || fs[i].empty()) fail(at, "expected a nonempty array");
        Face f;
        for (std::size_t k = 0; k < fs[i].size(); ++k) {
            const std::string key = fs[i][k].is_string() ? fs[i][k].get<std::string>() : fs[i][k].dump();
            const auto it = index.find(key);
            if (it == index.end()) fail(at + "/" + std::to_string(k), "unknown vertex " + key);
            f.push_back(it->second);
        }
        std::sort(f.begin(), f.end());
        if (std::adjacent_find(f.begin(), f.end()) != f.end()) fail(at, "repeated vertex in face");
        faces.push_back(f);
    }
    return SimplicialComplex(names, faces);
}

Json homology_to_json(const Homology& h)
{
    Json torsion = Json::array();
    for (const auto& [d, factors] : h.torsion) torsion.push_back({d, factors});
    return {{"betti", h.betti}, {"torsion", torsion}};
}

Json automorphism_to_json(const Automorphism& f)
{
    Json images = Json::object();
    for (int g = 0; g < f.basis().rank(); ++g) images[f.basis().generator_name(g)] = to_string(f.image(g), f.basis());
    return {{"n", f.basis().rank()}, {"s", f.basis().factor_ranks()}, {"images", images}};
}

Automorphism automorphism_from_json(const Json& j)
{
    const int n = as_int(field(j, "", "n"), "/n");
    const auto s = j.contains("s") ? int_list(j["s"], "/s") : std::vector<int>{};
    const BasisSpec basis(n, s);
    std::vector<Word> images;
    for (int g = 0; g < n; ++g) images.push_back(Word{letter_of(g)});
    const Json& im = field(j, "", "images");
    if (!im.is_object()) fail("/images", "expected an object keyed by generator");
    for (const auto& [name, text] : im.items()) {
        const std::string at = "/images/" + name;
        if (!text.is_string()) fail(at, "expected a word string");
        try {
            images[static_cast<std::size_t>(basis.generator_from_name(name))] = parse_word(text.get<std::string>(), basis);
        } catch (const InputError& e) {
            fail(at, e.what());
        }
    }
    return Automorphism(basis, images);
}

void write_file_atomic(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw InputError("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace relspine
