#include "relspine/metric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "relspine/enumerate.hpp"
#include "relspine/errors.hpp"
#include "relspine/parallel.hpp"

namespace relspine {

namespace {

// circle index per edge, -1 outside every circle
std::vector<int> circle_of_edge(const AGraph& g, int& circles)
{
    std::vector<int> out(static_cast<std::size_t>(g.graph.num_edges()), -1);
    circles = 0;
    for (const auto& w : g.wedges)
        for (const auto& c : w.circles) {
            for (Dart d : c) out[static_cast<std::size_t>(edge_of(d))] = circles;
            ++circles;
        }
    return out;
}

}  // namespace

std::vector<double> normalize(const AGraph& g, std::vector<double> raw)
{
    if (static_cast<int>(raw.size()) != g.graph.num_edges()) throw InputError("length count does not match the edge count");
    for (double x : raw)
        if (!(x > 0) || !std::isfinite(x)) throw InputError("edge lengths must be positive");
    int circles = 0;
    const auto block = circle_of_edge(g, circles);
    const bool volume = g.basis.rank() > g.basis.factor_total();
    std::vector<double> total(static_cast<std::size_t>(circles) + 1, 0.0);
    for (std::size_t e = 0; e < raw.size(); ++e) total[block[e] < 0 ? static_cast<std::size_t>(circles) : static_cast<std::size_t>(block[e])] += raw[e];
    for (std::size_t e = 0; e < raw.size(); ++e) {
        if (block[e] >= 0)
            raw[e] /= total[static_cast<std::size_t>(block[e])];
        else if (volume)
            raw[e] /= total[static_cast<std::size_t>(circles)];
    }
    return raw;
}

bool is_normalized(const AGraph& g, const std::vector<double>& lengths, double tol)
{
    if (static_cast<int>(lengths.size()) != g.graph.num_edges()) return false;
    int circles = 0;
    const auto block = circle_of_edge(g, circles);
    std::vector<double> total(static_cast<std::size_t>(circles) + 1, 0.0);
    bool outside = false;
    for (std::size_t e = 0; e < lengths.size(); ++e) {
        if (!(lengths[e] > 0) || lengths[e] > 1 + tol) return false;
        outside = outside || block[e] < 0;
        total[block[e] < 0 ? static_cast<std::size_t>(circles) : static_cast<std::size_t>(block[e])] += lengths[e];
    }
    for (int c = 0; c < circles; ++c)
        if (std::abs(total[static_cast<std::size_t>(c)] - 1) > tol) return false;
    if (outside && g.basis.rank() > g.basis.factor_total() && std::abs(total.back() - 1) > tol) return false;
    return true;
}

int polysimplex_dim(const AGraph& g)
{
    int circles = 0;
    const auto block = circle_of_edge(g, circles);
    const int outside = static_cast<int>(std::count(block.begin(), block.end(), -1));
    const int in_circles = g.graph.num_edges() - outside;
    const bool volume = g.basis.rank() > g.basis.factor_total();
    return in_circles - circles + (outside > 0 ? outside - (volume ? 1 : 0) : 0);
}

double path_length(const std::vector<double>& lengths, const DartPath& p)
{
    double s = 0;
    for (Dart d : p) s += lengths.at(static_cast<std::size_t>(edge_of(d)));
    return s;
}

DartPath cyclic_reduce_path(const DartPath& p)
{
    std::size_t a = 0, b = p.size();
    while (b - a >= 2 && p[a] == reverse_dart(p[b - 1])) {
        ++a;
        --b;
    }
    return DartPath(p.begin() + static_cast<std::ptrdiff_t>(a), p.begin() + static_cast<std::ptrdiff_t>(b));
}

DartPath realize_word(const MarkedAGraph& m, const Word& w)
{
    DartPath p;
    for (Letter a : w.letters()) {
        const auto& img = m.images.at(static_cast<std::size_t>(generator_of(a)));
        if (a > 0)
            p.insert(p.end(), img.begin(), img.end());
        else {
            const auto r = reverse_path(img);
            p.insert(p.end(), r.begin(), r.end());
        }
        p = reduce_path(p);
    }
    return p;
}

double loop_length(const MetricGraph& g, const Word& w)
{
    if (w.empty()) throw InputError("loop length of the trivial word");
    return path_length(g.lengths, cyclic_reduce_path(realize_word(g.marked, w)));
}

std::vector<Word> f_vector_words(const BasisSpec& basis, int factor)
{
    if (factor < 0 || factor >= basis.num_factors()) throw InputError("factor index out of range");
    const int s = basis.factor_rank(factor);
    std::vector<Word> out;
    for (int i = 0; i < s; ++i) out.push_back(Word{letter_of(basis.y(factor, i))});
    for (int i = 0; i < s; ++i)
        for (int l = i + 1; l < s; ++l) out.push_back(Word{letter_of(basis.y(factor, i)), letter_of(basis.y(factor, l))});
    for (int i = 0; i < s; ++i)
        for (int l = i + 1; l < s; ++l) out.push_back(Word{letter_of(basis.y(factor, i)), letter_of(basis.y(factor, l), true)});
    return out;
}

std::vector<double> f_vector(const MetricGraph& rose, int factor)
{
    const double n = rose.agraph().basis.rank();
    std::vector<double> out;
    for (const auto& w : f_vector_words(rose.agraph().basis, factor)) out.push_back(n * loop_length(rose, w));
    return out;
}

std::vector<double> f_vector(const MetricGraph& rose)
{
    std::vector<double> out;
    for (int j = 0; j < rose.agraph().basis.num_factors(); ++j) {
        const auto b = f_vector(rose, j);
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

std::weak_ordering lex_compare(const std::vector<double>& a, const std::vector<double>& b, double tol)
{
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] < b[i] - tol) return std::weak_ordering::less;
        if (a[i] > b[i] + tol) return std::weak_ordering::greater;
    }
    return a.size() <=> b.size();
}

DartPath GraphMap::image(Dart d) const
{
    const auto& p = edge_images.at(static_cast<std::size_t>(edge_of(d)));
    return (d & 1) ? reverse_path(p) : p;
}

DartPath GraphMap::image(const DartPath& p) const
{
    DartPath out;
    for (Dart d : p) {
        const auto q = image(d);
        out.insert(out.end(), q.begin(), q.end());
        out = reduce_path(out);
    }
    return out;
}

std::vector<std::string> validate_map(const GraphMap& f)
{
    std::vector<std::string> out;
    const Graph& S = f.source.graph();
    const Graph& T = f.target.graph();
    if (static_cast<int>(f.vertex_map.size()) != S.num_vertices()) out.push_back("vertex map size mismatch");
    if (static_cast<int>(f.edge_images.size()) != S.num_edges()) out.push_back("edge image count mismatch");
    if (!out.empty()) return out;
    for (EdgeId e = 0; e < S.num_edges(); ++e) {
        const auto& p = f.edge_images[static_cast<std::size_t>(e)];
        const Vertex from = f.vertex_map[static_cast<std::size_t>(S.origin(2 * e))];
        const Vertex to = f.vertex_map[static_cast<std::size_t>(S.terminus(2 * e))];
        bool ok = reduce_path(p) == p;
        Vertex at = from;
        for (Dart d : p) {
            if (d < 0 || d >= T.num_darts() || T.origin(d) != at) {
                ok = false;
                break;
            }
            at = T.terminus(d);
        }
        if (!ok || at != to) out.push_back("image of edge " + std::to_string(e) + " is not a reduced path between the vertex images");
    }
    return out;
}

GraphMap comparison_map(const MetricGraph& source, const MetricGraph& target)
{
    const Graph& S = source.graph();
    if (!(source.agraph().basis == target.agraph().basis)) throw InputError("comparison map needs a common basis");
    const FundamentalGroup pi(S, source.marked.base);
    std::vector<Word> words;
    for (const auto& p : source.marked.images) words.push_back(pi.word(p));
    // phi_source as an automorphism from F_n onto pi_1(S); invert it.
    const Automorphism inv = inverse(Automorphism(pi.basis(), words));
    GraphMap f;
    f.source = source;
    f.target = target;
    f.vertex_map.assign(static_cast<std::size_t>(S.num_vertices()), target.marked.base);
    f.edge_images.assign(static_cast<std::size_t>(S.num_edges()), {});
    int next = 0;
    for (EdgeId e = 0; e < S.num_edges(); ++e) {
        if (pi.in_tree(e)) continue;
        f.edge_images[static_cast<std::size_t>(e)] = realize_word(target.marked, inv.image(next++));
    }
    if (S.num_vertices() == 1) {
        // Move the vertex image along the prefix u minimizing the total
        // length of the reduced u^-1 p u; candidates are prefixes of images.
        std::vector<DartPath> prefixes{{}};
        for (const auto& p : f.edge_images)
            for (const DartPath& q : {p, reverse_path(p)})
                for (std::size_t len = 1; len <= q.size(); ++len) prefixes.emplace_back(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(len));
        std::size_t best_total = 0;
        std::vector<DartPath> best;
        Vertex best_vertex = f.vertex_map[0];
        bool have = false;
        for (const auto& u : prefixes) {
            const DartPath ru = reverse_path(u);
            std::vector<DartPath> moved;
            std::size_t total = 0;
            for (const auto& p : f.edge_images) {
                DartPath q = ru;
                q.insert(q.end(), p.begin(), p.end());
                q.insert(q.end(), u.begin(), u.end());
                moved.push_back(reduce_path(q));
                total += moved.back().size();
            }
            if (!have || total < best_total) {
                have = true;
                best_total = total;
                best = std::move(moved);
                best_vertex = u.empty() ? f.vertex_map[0] : target.graph().terminus(u.back());
            }
        }
        f.edge_images = std::move(best);
        f.vertex_map[0] = best_vertex;
    }
    return f;
}

double edge_stretch(const GraphMap& f, EdgeId e)
{
    const double len = f.source.lengths.at(static_cast<std::size_t>(e));
    if (!(len > 0)) throw InputError("degenerate metric");
    return path_length(f.target.lengths, f.edge_images.at(static_cast<std::size_t>(e))) / len;
}

double map_lipschitz(const GraphMap& f)
{
    double best = 0;
    for (EdgeId e = 0; e < f.source.graph().num_edges(); ++e) best = std::max(best, edge_stretch(f, e));
    return best;
}

double loop_stretch(const GraphMap& f, const DartPath& loop)
{
    const double len = path_length(f.source.lengths, loop);
    if (!(len > 0)) throw InputError("degenerate metric");
    return path_length(f.target.lengths, cyclic_reduce_path(f.image(loop))) / len;
}

namespace {

DartPath rotate_to(const DartPath& c, Vertex v, const Graph& g)
{
    for (std::size_t i = 0; i < c.size(); ++i)
        if (g.origin(c[i]) == v) {
            DartPath r(c.begin() + static_cast<std::ptrdiff_t>(i), c.end());
            r.insert(r.end(), c.begin(), c.begin() + static_cast<std::ptrdiff_t>(i));
            return r;
        }
    return {};
}

std::set<Vertex> vertices_of(const DartPath& c, const Graph& g)
{
    std::set<Vertex> s;
    for (Dart d : c) s.insert(g.origin(d));
    return s;
}

// Embedded paths from a vertex of A to a vertex of B avoiding A and B otherwise.
void bars(const Graph& g, const std::set<Vertex>& A, const std::set<Vertex>& B, const std::set<EdgeId>& used,
          std::vector<DartPath>& out)
{
    std::vector<bool> on(static_cast<std::size_t>(g.num_vertices()), false);
    DartPath path;
    std::function<void(Vertex)> dfs = [&](Vertex at) {
        for (Dart d : g.darts_at(at)) {
            if (used.count(edge_of(d))) continue;
            const Vertex to = g.terminus(d);
            if (on[static_cast<std::size_t>(to)] || A.count(to)) continue;
            path.push_back(d);
            if (B.count(to))
                out.push_back(path);
            else {
                on[static_cast<std::size_t>(to)] = true;
                dfs(to);
                on[static_cast<std::size_t>(to)] = false;
            }
            path.pop_back();
        }
    };
    for (Vertex a : A) {
        on[static_cast<std::size_t>(a)] = true;
        dfs(a);
        on[static_cast<std::size_t>(a)] = false;
    }
}

}  // namespace

std::vector<DartPath> candidate_loops(const Graph& g, Candidates which)
{
    const auto cycles = embedded_cycles(g);
    std::vector<DartPath> out(cycles.begin(), cycles.end());
    std::vector<std::set<Vertex>> verts;
    std::vector<std::set<EdgeId>> edges;
    for (const auto& c : cycles) {
        verts.push_back(vertices_of(c, g));
        std::set<EdgeId> es;
        for (Dart d : c) es.insert(edge_of(d));
        edges.push_back(es);
    }
    for (std::size_t a = 0; a < cycles.size(); ++a)
        for (std::size_t b = a + 1; b < cycles.size(); ++b) {
            std::vector<Vertex> shared;
            std::set_intersection(verts[a].begin(), verts[a].end(), verts[b].begin(), verts[b].end(), std::back_inserter(shared));
            if (shared.size() == 1) {
                const DartPath ca = rotate_to(cycles[a], shared[0], g);
                const DartPath cb = rotate_to(cycles[b], shared[0], g);
                DartPath p = ca;
                p.insert(p.end(), cb.begin(), cb.end());
                out.push_back(p);
                p = ca;
                const auto rb = reverse_path(cb);
                p.insert(p.end(), rb.begin(), rb.end());
                out.push_back(p);
            } else if (shared.empty() && which == Candidates::with_barbells) {
                std::set<EdgeId> used = edges[a];
                used.insert(edges[b].begin(), edges[b].end());
                std::vector<DartPath> found;
                bars(g, verts[a], verts[b], used, found);
                for (const auto& bar : found) {
                    const Vertex u = g.origin(bar.front());
                    const Vertex v = g.terminus(bar.back());
                    for (int flip = 0; flip < 2; ++flip) {
                        DartPath p = rotate_to(cycles[a], u, g);
                        p.insert(p.end(), bar.begin(), bar.end());
                        DartPath cb = rotate_to(cycles[b], v, g);
                        if (flip) cb = reverse_path(cb);
                        p.insert(p.end(), cb.begin(), cb.end());
                        const auto back = reverse_path(bar);
                        p.insert(p.end(), back.begin(), back.end());
                        out.push_back(p);
                    }
                }
            }
        }
    return out;
}

namespace {

LipschitzResult best_of(const GraphMap& f, const std::vector<DartPath>& loops, bool parallel)
{
    std::vector<double> value(loops.size(), 0.0);
    parallel_for(loops.size(), [&](std::size_t i) { value[i] = loop_stretch(f, loops[i]); }, parallel);
    LipschitzResult r;
    if (loops.empty()) return r;
    r.value = *std::max_element(value.begin(), value.end());
    bool have = false;
    for (std::size_t i = 0; i < loops.size(); ++i)
        if (value[i] >= r.value - stretch_tolerance && (!have || loops[i] < r.witness)) {
            r.witness = loops[i];
            have = true;
        }
    return r;
}

}  // namespace

LipschitzResult lipschitz(const GraphMap& f, Candidates which, bool parallel)
{
    for (double x : f.source.lengths)
        if (!(x > 0)) throw InputError("degenerate metric");
    return best_of(f, candidate_loops(f.source.graph(), which), parallel);
}

LipschitzResult brute_force_lipschitz(const GraphMap& f, int max_darts)
{
    const Graph& g = f.source.graph();
    if (max_darts < 0) max_darts = 2 * g.num_edges();
    std::vector<DartPath> loops;
    DartPath path;
    std::function<void()> grow = [&]() {
        const Dart first = path.front();
        const Dart last = path.back();
        if (g.terminus(last) == g.origin(first) && first != reverse_dart(last)) loops.push_back(path);
        if (static_cast<int>(path.size()) == max_darts) return;
        for (Dart d : g.darts_at(g.terminus(last))) {
            if (d == reverse_dart(last)) continue;
            path.push_back(d);
            grow();
            path.pop_back();
        }
    };
    for (Dart d = 0; d < g.num_darts(); ++d) {
        path = {d};
        grow();
    }
    return best_of(f, loops, true);
}

std::vector<EdgeId> max_stretch_subgraph(const GraphMap& f)
{
    const double lip = map_lipschitz(f);
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < f.source.graph().num_edges(); ++e)
        if (edge_stretch(f, e) >= lip - stretch_tolerance * std::max(1.0, lip)) out.push_back(e);
    return out;
}

std::vector<Turn> turns_of_loop(const DartPath& loop)
{
    std::vector<Turn> out;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const Dart a = reverse_dart(loop[i]);
        const Dart b = loop[(i + 1) % loop.size()];
        out.emplace_back(std::min(a, b), std::max(a, b));
    }
    return out;
}

TurnAnalysis turn_analysis(const GraphMap& f)
{
    const Graph& S = f.source.graph();
    const Graph& T = f.target.graph();
    TurnAnalysis r;
    for (Dart d = 0; d < S.num_darts(); ++d) {
        const auto p = f.image(d);
        if (p.empty()) throw InputError("turn analysis needs a map collapsing no edge");
        r.Df.push_back(p.front());
    }
    r.self_map = S.num_vertices() == T.num_vertices() && S.num_edges() == T.num_edges();
    for (Dart d = 0; r.self_map && d < S.num_darts(); ++d) r.self_map = S.origin(d) == T.origin(d);

    std::map<Turn, Turn> step;
    for (Vertex v = 0; v < S.num_vertices(); ++v) {
        const auto darts = S.darts_at(v);
        for (std::size_t a = 0; a < darts.size(); ++a)
            for (std::size_t b = a + 1; b < darts.size(); ++b) {
                const Turn t{darts[a], darts[b]};
                const Dart x = r.Df[static_cast<std::size_t>(t.first)], y = r.Df[static_cast<std::size_t>(t.second)];
                step[t] = {std::min(x, y), std::max(x, y)};
            }
    }
    for (const auto& [t, u] : step) r.Tf.emplace_back(t, u);
    for (const auto& [t, u0] : step) {
        Turn u = u0;
        bool illegal = u.first == u.second;
        std::set<Turn> seen{t};
        while (!illegal && r.self_map && seen.insert(u).second) {
            u = step.at(u);
            illegal = u.first == u.second;
        }
        if (illegal) r.illegal.push_back(t);
    }
    return r;
}

OptimalityReport is_optimal(const GraphMap& f)
{
    OptimalityReport r;
    r.gamma_f = max_stretch_subgraph(f);
    const std::set<EdgeId> in(r.gamma_f.begin(), r.gamma_f.end());
    const Graph& S = f.source.graph();
    for (Vertex v = 0; v < S.num_vertices() && r.optimal; ++v) {
        std::set<Dart> gates;
        int darts = 0;
        for (Dart d : S.darts_at(v)) {
            if (!in.count(edge_of(d))) continue;
            ++darts;
            const auto p = f.image(d);
            gates.insert(p.empty() ? -1 : p.front());
        }
        if (darts > 0 && gates.size() < 2) {
            r.optimal = false;
            r.offending = v;
        }
    }
    return r;
}

std::vector<Automorphism> nielsen_ball(int rank, int bound)
{
    if (rank < 1) throw InputError("rank must be positive");
    if (bound < 0) throw InputError("bound must be nonnegative");
    if (bound > 6) throw InputError("Nielsen ball bound above 6 refused");
    const BasisSpec B(rank, {});
    std::vector<Automorphism> moves;
    auto identity_images = [&]() {
        std::vector<Word> w;
        for (int g = 0; g < rank; ++g) w.push_back(Word{letter_of(g)});
        return w;
    };
    for (int i = 0; i < rank; ++i) {
        auto w = identity_images();
        w[static_cast<std::size_t>(i)] = Word{letter_of(i, true)};
        moves.emplace_back(B, w);
        for (int l = 0; l < rank; ++l) {
            if (l == i) continue;
            if (l > i) {
                auto p = identity_images();
                std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(l)]);
                moves.emplace_back(B, p);
            }
            for (bool inv : {false, true}) {
                auto r = identity_images();
                r[static_cast<std::size_t>(i)] = Word{letter_of(i), letter_of(l, inv)};
                moves.emplace_back(B, r);
                auto left = identity_images();
                left[static_cast<std::size_t>(i)] = Word{letter_of(l, inv), letter_of(i)};
                moves.emplace_back(B, left);
            }
        }
    }
    std::vector<Automorphism> out{Automorphism(B, identity_images())};
    std::set<std::vector<Word>> seen{out.front().images()};
    std::vector<Automorphism> frontier = out;
    for (int step = 0; step < bound; ++step) {
        std::vector<Automorphism> next;
        for (const auto& a : frontier)
            for (const auto& m : moves) {
                Automorphism c = compose(a, m);
                if (seen.insert(c.images()).second) {
                    next.push_back(c);
                    out.push_back(c);
                }
            }
        frontier = std::move(next);
    }
    return out;
}

namespace {

std::vector<double> block_vector(const MetricGraph& rose, const std::vector<Word>& words)
{
    const double n = rose.agraph().basis.rank();
    std::vector<double> out;
    for (const auto& w : words) out.push_back(n * loop_length(rose, w));
    return out;
}

}  // namespace

MinsetReport minset_check(int rank, int bound)
{
    MinsetReport r;
    r.rank = rank;
    r.bound = bound;
    // Roses of the factor's own spine: plain Out(F_rank), test words of the factor.
    const auto words = f_vector_words(BasisSpec(rank, {rank}), 0);
    const BasisSpec B(rank, {});
    MetricGraph unit{marked_rose(B), std::vector<double>(static_cast<std::size_t>(rank), 1.0)};
    r.unit_vector = block_vector(unit, words);
    for (const auto& psi : nielsen_ball(rank, bound)) {
        ++r.competitors;
        MetricGraph other{act(unit.marked, psi), unit.lengths};
        const auto v = block_vector(other, words);
        const auto cmp = lex_compare(v, r.unit_vector);
        if (cmp == std::weak_ordering::less) {
            if (r.minimal) r.violation = psi;
            r.minimal = false;
        } else if (cmp == std::weak_ordering::equivalent) {
            ++r.ties;
            const GraphMap f = comparison_map(unit, other);
            const auto lip = lipschitz(f, Candidates::cycles_and_figure_eights, false);
            const auto opt = is_optimal(f);
            bool ok = std::abs(lip.value - 1) <= stretch_tolerance && std::abs(map_lipschitz(f) - 1) <= stretch_tolerance &&
                      static_cast<int>(opt.gamma_f.size()) == rank && opt.optimal;
            if (ok) ok = turn_analysis(f).illegal.empty();
            r.ties_isometric = r.ties_isometric && ok;
        } else if (!r.worst || lex_compare(v, r.worst_vector) == std::weak_ordering::less) {
            r.worst = psi;
            r.worst_vector = v;
        }
    }
    return r;
}

}  // namespace relspine
