#include "relspine/marked.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "relspine/errors.hpp"
#include "relspine/spine.hpp"

namespace relspine {

DartPath reduce_path(const DartPath& p)
{
    DartPath out;
    for (Dart d : p) {
        if (!out.empty() && out.back() == reverse_dart(d))
            out.pop_back();
        else
            out.push_back(d);
    }
    return out;
}

DartPath reverse_path(const DartPath& p)
{
    DartPath out;
    for (auto it = p.rbegin(); it != p.rend(); ++it) out.push_back(reverse_dart(*it));
    return out;
}

MarkedAGraph marked_rose(const BasisSpec& basis)
{
    MarkedAGraph m;
    m.graph = rose(basis);
    for (int g = 0; g < basis.rank(); ++g) m.images.push_back({2 * g});
    return m;
}

FundamentalGroup::FundamentalGroup(const Graph& g, Vertex root) : generator_(static_cast<std::size_t>(g.num_edges()), -1)
{
    std::vector<bool> tree(static_cast<std::size_t>(g.num_edges()), false);
    std::vector<bool> seen(static_cast<std::size_t>(g.num_vertices()), false);
    std::deque<Vertex> queue{root};
    seen[static_cast<std::size_t>(root)] = true;
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        for (Dart d : g.darts_at(v)) {
            const Vertex w = g.terminus(d);
            if (seen[static_cast<std::size_t>(w)]) continue;
            seen[static_cast<std::size_t>(w)] = true;
            tree[static_cast<std::size_t>(edge_of(d))] = true;
            queue.push_back(w);
        }
    }
    int next = 0;
    for (EdgeId e = 0; e < g.num_edges(); ++e)
        if (!tree[static_cast<std::size_t>(e)]) generator_[static_cast<std::size_t>(e)] = next++;
    basis_ = BasisSpec(next, {});
}

Word FundamentalGroup::word(const DartPath& path) const
{
    std::vector<Letter> letters;
    for (Dart d : path) {
        const int gen = generator_.at(static_cast<std::size_t>(edge_of(d)));
        if (gen >= 0) letters.push_back(letter_of(gen, (d & 1) != 0));
    }
    return Word(letters);
}

MarkedAGraph standard_marking(const Graph& g, Vertex base)
{
    const FundamentalGroup pi(g, base);
    // Tree paths from the base by BFS parent darts.
    std::vector<DartPath> to(static_cast<std::size_t>(g.num_vertices()));
    std::vector<bool> seen(static_cast<std::size_t>(g.num_vertices()), false);
    std::deque<Vertex> queue{base};
    seen[static_cast<std::size_t>(base)] = true;
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        for (Dart d : g.darts_at(v)) {
            const Vertex w = g.terminus(d);
            if (seen[static_cast<std::size_t>(w)] || !pi.in_tree(edge_of(d))) continue;
            seen[static_cast<std::size_t>(w)] = true;
            to[static_cast<std::size_t>(w)] = to[static_cast<std::size_t>(v)];
            to[static_cast<std::size_t>(w)].push_back(d);
            queue.push_back(w);
        }
    }
    MarkedAGraph m;
    m.graph.graph = g;
    m.graph.basis = pi.basis();
    m.base = base;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        if (pi.in_tree(e)) continue;
        DartPath p = to[static_cast<std::size_t>(g.origin(2 * e))];
        p.push_back(2 * e);
        const auto back = reverse_path(to[static_cast<std::size_t>(g.terminus(2 * e))]);
        p.insert(p.end(), back.begin(), back.end());
        m.images.push_back(reduce_path(p));
    }
    return m;
}

std::vector<std::string> validate_marking(const MarkedAGraph& m)
{
    std::vector<std::string> out;
    const Graph& G = m.graph.graph;
    const BasisSpec& B = m.graph.basis;
    if (static_cast<int>(m.images.size()) != B.rank()) {
        out.push_back("marking has " + std::to_string(m.images.size()) + " images for rank " + std::to_string(B.rank()));
        return out;
    }
    for (std::size_t g = 0; g < m.images.size(); ++g) {
        const auto& p = m.images[g];
        bool ok = reduce_path(p) == p;
        for (std::size_t i = 0; ok && i < p.size(); ++i) {
            if (p[i] < 0 || p[i] >= G.num_darts()) ok = false;
            else if (i + 1 < p.size() && G.terminus(p[i]) != G.origin(p[i + 1])) ok = false;
        }
        if (ok && !p.empty() && (G.origin(p.front()) != m.base || G.terminus(p.back()) != m.base)) ok = false;
        if (!ok) out.push_back("image of " + B.generator_name(static_cast<int>(g)) + " is not a reduced closed path at the base");
    }
    if (!out.empty()) return out;
    for (int j = 0; j < B.num_factors(); ++j)
        for (int i = 0; i < B.factor_rank(j); ++i) {
            DartPath p = m.images[static_cast<std::size_t>(B.y(j, i))];
            while (p.size() >= 2 && p.front() == reverse_dart(p.back())) p = DartPath(p.begin() + 1, p.end() - 1);
            const auto& c = m.graph.wedges.at(static_cast<std::size_t>(j)).circles.at(static_cast<std::size_t>(i));
            bool same = p.size() == c.size();
            if (same) {
                auto it = std::find(p.begin(), p.end(), c.front());
                same = it != p.end();
                if (same) {
                    std::rotate(p.begin(), it, p.end());
                    same = p == c;
                }
            }
            if (!same) out.push_back("circle " + std::to_string(i + 1) + " of wedge " + std::to_string(j + 1) + " does not carry " +
                                     B.generator_name(B.y(j, i)));
        }
    const FundamentalGroup pi(G, m.base);
    if (pi.basis().rank() != B.rank()) {
        out.push_back("graph rank does not match the basis");
        return out;
    }
    std::vector<Word> words;
    for (const auto& p : m.images) words.push_back(pi.word(p));
    const auto verdict = nielsen_reduce(Automorphism(pi.basis(), words)).verdict;
    if (verdict != NielsenVerdict::basis)
        out.push_back(verdict == NielsenVerdict::not_basis ? "marking images do not form a basis" : "could not certify the marking is a basis");
    return out;
}

MarkedAGraph act(const MarkedAGraph& m, const Automorphism& psi)
{
    if (!(psi.basis() == m.graph.basis)) throw InputError("automorphism basis does not match the marked graph");
    if (!is_relative(psi)) throw InputError("automorphism is not relative to the factor system");
    MarkedAGraph out = m;
    for (int g = 0; g < m.graph.basis.rank(); ++g) {
        DartPath p;
        for (Letter a : psi.image(g).letters()) {
            const auto& img = m.images[static_cast<std::size_t>(generator_of(a))];
            if (a > 0)
                p.insert(p.end(), img.begin(), img.end());
            else {
                const auto r = reverse_path(img);
                p.insert(p.end(), r.begin(), r.end());
            }
            p = reduce_path(p);
        }
        out.images[static_cast<std::size_t>(g)] = p;
    }
    return out;
}

MarkedAGraph collapse(const MarkedAGraph& m, const std::vector<EdgeId>& forest)
{
    const CollapseResult r = collapse_forest(m.graph, forest);
    MarkedAGraph out;
    out.graph = r.graph;
    out.base = r.vertex_map[static_cast<std::size_t>(m.base)];
    for (const auto& p : m.images) {
        DartPath q;
        for (Dart d : p)
            if (r.dart_map[static_cast<std::size_t>(d)] >= 0) q.push_back(r.dart_map[static_cast<std::size_t>(d)]);
        out.images.push_back(reduce_path(q));
    }
    return out;
}

MarkedAGraph blow_up(const MarkedAGraph& m, Vertex v, const std::vector<IdealEdge>& family)
{
    const BlowUpResult r = blow_up(m.graph, v, family);
    MarkedAGraph out;
    out.graph = r.graph;
    out.base = m.base;
    for (const auto& p : m.images) out.images.push_back(reduce_path(r.lift_path(p)));
    // Re-anchor circle images on the new circles when their base moved.
    return out;
}

std::optional<GraphIsomorphism> marked_equivalence(const MarkedAGraph& a, const MarkedAGraph& b)
{
    if (!(a.graph.basis == b.graph.basis)) return std::nullopt;
    if (canonical_form(a.graph) != canonical_form(b.graph)) return std::nullopt;
    const FundamentalGroup pi(b.graph.graph, b.base);
    std::vector<Word> target;
    for (const auto& p : b.images) target.push_back(pi.word(p));
    std::vector<std::vector<std::set<EdgeId>>> circles_b;
    for (const auto& w : b.graph.wedges) {
        circles_b.emplace_back();
        for (const auto& c : w.circles) {
            std::set<EdgeId> es;
            for (Dart d : c) es.insert(edge_of(d));
            circles_b.back().push_back(es);
        }
    }
    std::optional<GraphIsomorphism> found;
    for_each_isomorphism(a.graph, b.graph, [&](const GraphIsomorphism& h) {
        for (std::size_t j = 0; j < a.graph.wedges.size(); ++j)
            for (std::size_t i = 0; i < a.graph.wedges[j].circles.size(); ++i) {
                std::set<EdgeId> es;
                for (Dart d : a.graph.wedges[j].circles[i]) es.insert(edge_of(h.dart_map[static_cast<std::size_t>(d)]));
                if (es != circles_b[j][i]) return true;
            }
        std::vector<Word> source;
        for (const auto& p : a.images) {
            DartPath q;
            for (Dart d : p) q.push_back(h.dart_map[static_cast<std::size_t>(d)]);
            source.push_back(pi.word(q));
        }
        if (find_conjugator(target, source)) {
            found = h;
            return false;
        }
        return true;
    });
    return found;
}

namespace {

int find_equivalent(const std::vector<MarkedAGraph>& pool, const std::vector<TypeKey>& keys, const MarkedAGraph& m, const TypeKey& key)
{
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (keys[i] == key && marked_equivalence(pool[i], m)) return static_cast<int>(i);
    return -1;
}

}  // namespace

SpineBall spine_ball(const MarkedAGraph& base, const std::vector<Automorphism>& gens, int radius)
{
    if (radius < 0) throw InputError("radius must be nonnegative");
    std::vector<Automorphism> moves;
    for (const auto& g : gens) {
        if (!is_relative(g)) throw InputError("generator is not relative to the factor system");
        moves.push_back(g);
        moves.push_back(inverse(g));
    }
    SpineBall ball;
    auto add = [&](const MarkedAGraph& m) {
        const TypeKey key = canonical_form(m.graph);
        const int at = find_equivalent(ball.vertices, ball.types, m, key);
        if (at >= 0) return std::make_pair(at, false);
        ball.vertices.push_back(m);
        ball.types.push_back(key);
        return std::make_pair(static_cast<int>(ball.vertices.size()) - 1, true);
    };
    // Breadth-first over words; the marking of a word w is base . w.
    std::vector<std::pair<MarkedAGraph, int>> frontier{{base, 0}};
    ball.orbit.push_back(add(base).first);
    while (!frontier.empty()) {
        std::vector<std::pair<MarkedAGraph, int>> next;
        for (const auto& [m, depth] : frontier) {
            if (depth == radius) continue;
            for (const auto& g : moves) {
                MarkedAGraph moved = act(m, g);
                const auto [at, fresh] = add(moved);
                if (fresh) {
                    ball.orbit.push_back(at);
                    next.emplace_back(std::move(moved), depth + 1);
                }
            }
        }
        frontier = std::move(next);
    }
    if (radius >= 1) {
        const std::vector<int> orbit = ball.orbit;
        for (int o : orbit) {
            const MarkedAGraph point = ball.vertices[static_cast<std::size_t>(o)];
            for (Vertex v = 0; v < point.graph.graph.num_vertices(); ++v) {
                std::vector<IdealEdge> legal;
                for (const auto& e : ideal_edges_at(point.graph, v))
                    if (is_legal(point.graph, e)) legal.push_back(e);
                // Compatible families whose blow-up is an A-graph.
                std::vector<IdealEdge> fam;
                std::function<void(std::size_t)> grow = [&](std::size_t from) {
                    for (std::size_t i = from; i < legal.size(); ++i) {
                        bool ok = true;
                        for (const auto& f : fam) ok = ok && compatible(point.graph, f, legal[i]);
                        if (!ok) continue;
                        fam.push_back(legal[i]);
                        bool valid = false;
                        try {
                            MarkedAGraph up = blow_up(point, v, fam);
                            if (validate_agraph(up.graph).empty()) {
                                valid = true;
                                add(up);
                            }
                        } catch (const InputError&) {
                        }
                        if (valid) grow(i + 1);
                        fam.pop_back();
                    }
                };
                grow(0);
            }
        }
    }
    // Order: x < y when a forest collapse of y is equivalent to x.
    std::vector<std::pair<int, int>> rel;
    std::vector<std::string> names;
    for (std::size_t y = 0; y < ball.vertices.size(); ++y) {
        names.push_back("m" + std::to_string(y) + ":" + ball.types[y]);
        for (const auto& forest : collapsible_forests(ball.vertices[y].graph)) {
            const MarkedAGraph down = collapse(ball.vertices[y], forest);
            const int x = find_equivalent(ball.vertices, ball.types, down, canonical_form(down.graph));
            if (x >= 0 && x != static_cast<int>(y)) rel.emplace_back(x, static_cast<int>(y));
        }
    }
    ball.poset = Poset(names, rel);
    ball.complex = order_complex(ball.poset);
    std::vector<int> reduced;
    for (std::size_t i = 0; i < ball.vertices.size(); ++i)
        if (ball.vertices[i].graph.graph.separating_edges().empty()) reduced.push_back(static_cast<int>(i));
    ball.reduced_poset = ball.poset.induced(reduced);
    ball.reduced_complex = order_complex(ball.reduced_poset);
    return ball;
}

}  // namespace relspine
