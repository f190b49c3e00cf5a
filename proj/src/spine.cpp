#include "relspine/spine.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <set>

#include "relspine/errors.hpp"
#include "relspine/parallel.hpp"

namespace relspine {

TypePoset collapse_poset(std::vector<AGraph> types, bool pre_agraph, bool parallel)
{
    std::vector<TypeKey> keys(types.size());
    for (std::size_t i = 0; i < types.size(); ++i) keys[i] = canonical_form(types[i]);
    std::map<TypeKey, int> index;
    for (std::size_t i = 0; i < keys.size(); ++i)
        if (!index.emplace(keys[i], static_cast<int>(i)).second) throw InputError("duplicate type in collapse poset input");

    std::vector<std::vector<int>> below(types.size());
    parallel_for(
        types.size(),
        [&](std::size_t y) {
            std::set<int> found;
            for (const auto& forest : collapsible_forests(types[y], pre_agraph)) {
                const auto it = index.find(canonical_form(contract_edges(types[y], forest).graph));
                if (it != index.end() && it->second != static_cast<int>(y)) found.insert(it->second);
            }
            below[y].assign(found.begin(), found.end());
        },
        parallel);
    std::vector<std::pair<int, int>> rel;
    for (std::size_t y = 0; y < types.size(); ++y)
        for (int x : below[y]) rel.emplace_back(x, static_cast<int>(y));
    return {Poset(keys, rel), std::move(types)};
}

TypePoset collapse_poset(const BasisSpec& basis, const EnumerationOptions& options)
{
    auto result = enumerate_agraph_types(basis, options);
    return collapse_poset(std::move(result.types), false, options.parallel);
}

bool is_small(const AGraph& g)
{
    const auto mask = g.vertex_wedge_mask();
    return std::all_of(mask.begin(), mask.end(), [](std::uint32_t m) { return std::popcount(m) <= 1; });
}

TypePoset small_spine(const TypePoset& p)
{
    std::vector<int> keep;
    std::vector<AGraph> types;
    for (int i = 0; i < p.poset.size(); ++i)
        if (is_small(p.types[static_cast<std::size_t>(i)])) {
            keep.push_back(i);
            types.push_back(p.types[static_cast<std::size_t>(i)]);
        }
    return {p.poset.induced(keep), std::move(types)};
}

namespace {

std::string ideal_name(const IdealEdge& e)
{
    std::string s = "v" + std::to_string(e.vertex) + ":{";
    for (std::size_t i = 0; i < e.pulled.size(); ++i) s += (i ? "," : "") + std::to_string(e.pulled[i]);
    return s + "}";
}

SimplicialComplex compatibility_complex(const AGraph& g, const std::vector<IdealEdge>& edges)
{
    std::vector<std::string> names;
    for (const auto& e : edges) names.push_back(ideal_name(e));
    std::vector<std::vector<bool>> adj(edges.size(), std::vector<bool>(edges.size(), false));
    for (std::size_t a = 0; a < edges.size(); ++a)
        for (std::size_t b = 0; b < edges.size(); ++b)
            adj[a][b] = a != b && compatible(g, edges[a], edges[b]);
    return clique_complex(std::move(names), adj);
}

}  // namespace

LinkComplexes link_complexes(const AGraph& g, Vertex v)
{
    LinkComplexes out;
    out.ideal = ideal_edges_at(g, v);
    for (const auto& e : out.ideal)
        if (is_legal(g, e)) out.legal.push_back(e);
    out.B = compatibility_complex(g, out.ideal);
    out.L = compatibility_complex(g, out.legal);
    return out;
}

RetractReport poset_retract(const Poset& p, const std::vector<int>& f)
{
    RetractReport r;
    const int n = p.size();
    if (static_cast<int>(f.size()) != n) throw InputError("map size does not match the poset");
    for (int x = 0; x < n && r.maps_into; ++x)
        if (f[static_cast<std::size_t>(x)] < 0 || f[static_cast<std::size_t>(x)] >= n) {
            r.maps_into = false;
            r.witness = std::make_pair(x, f[static_cast<std::size_t>(x)]);
        }
    if (!r.maps_into) return r;
    for (int x = 0; x < n && r.below; ++x)
        if (!p.less_equal(f[static_cast<std::size_t>(x)], x)) {
            r.below = false;
            r.witness = std::make_pair(x, f[static_cast<std::size_t>(x)]);
        }
    for (int x = 0; x < n && r.monotone; ++x)
        for (int y = 0; y < n; ++y)
            if (p.less(x, y) && !p.less_equal(f[static_cast<std::size_t>(x)], f[static_cast<std::size_t>(y)])) {
                r.monotone = false;
                if (!r.witness) r.witness = std::make_pair(x, y);
                break;
            }
    std::set<int> image(f.begin(), f.end());
    r.image.assign(image.begin(), image.end());
    r.source = homology(order_complex(p));
    r.target = homology(order_complex(p.induced(r.image)));
    // Betti vectors run to the complex dimension; compare without trailing zeros.
    auto trimmed = [](Homology h) {
        while (h.betti.size() > 1 && h.betti.back() == 0) h.betti.pop_back();
        return h;
    };
    r.homology_preserved = trimmed(r.source) == trimmed(r.target);
    return r;
}

StarOfRose star_of_rose(const AGraph& rose, bool pre_agraph)
{
    if (rose.graph.num_vertices() != 1) throw InputError("star_of_rose needs a single-vertex graph");
    StarOfRose star;
    auto check = [&](const AGraph& g) { return pre_agraph ? validate_pre_agraph(g) : validate_agraph(g); };
    for (const auto& e : ideal_edges_at(rose, 0)) {
        if (!pre_agraph) {
            if (is_legal(rose, e)) star.legal.push_back(e);
            continue;
        }
        try {
            if (check(blow_up(rose, 0, {e}).graph).empty()) star.legal.push_back(e);
        } catch (const InputError&) {
        }
    }
    const std::size_t L = star.legal.size();
    std::vector<std::vector<bool>> compat(L, std::vector<bool>(L, false));
    for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = 0; b < L; ++b) compat[a][b] = a != b && compatible(rose, star.legal[a], star.legal[b]);

    auto valid = [&](const std::vector<int>& fam) {
        std::vector<IdealEdge> edges;
        for (int i : fam) edges.push_back(star.legal[static_cast<std::size_t>(i)]);
        try {
            auto b = blow_up(rose, 0, edges);
            if (!check(b.graph).empty()) return std::optional<TypeKey>{};
            return std::optional<TypeKey>{canonical_form(b.graph)};
        } catch (const InputError&) {
            return std::optional<TypeKey>{};
        }
    };
    std::vector<int> fam;
    std::function<void(std::size_t)> grow = [&](std::size_t from) {
        for (std::size_t i = from; i < L; ++i) {
            bool ok = true;
            for (int j : fam) ok = ok && compat[i][static_cast<std::size_t>(j)];
            if (!ok) continue;
            fam.push_back(static_cast<int>(i));
            if (auto key = valid(fam)) {
                star.families.push_back(fam);
                star.blowups.push_back(*key);
                star.max_family = std::max(star.max_family, static_cast<int>(fam.size()));
                grow(i + 1);
            }
            fam.pop_back();
        }
    };
    grow(0);

    std::vector<std::string> names;
    for (const auto& f : star.families) {
        std::string s = "{";
        for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
        names.push_back(s + "}");
    }
    std::vector<std::pair<int, int>> rel;
    for (std::size_t a = 0; a < star.families.size(); ++a)
        for (std::size_t b = 0; b < star.families.size(); ++b) {
            const auto& A = star.families[a];
            const auto& B = star.families[b];
            if (A.size() < B.size() && std::includes(B.begin(), B.end(), A.begin(), A.end()))
                rel.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
    star.poset = Poset(std::move(names), rel);
    for (const auto& f : star.families) {
        const bool covered = std::any_of(star.families.begin(), star.families.end(), [&](const auto& g) {
            return g.size() > f.size() && std::includes(g.begin(), g.end(), f.begin(), f.end());
        });
        if (!covered) star.maximal_families.push_back(f);
    }
    return star;
}

}  // namespace relspine
