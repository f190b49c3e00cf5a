#include "relspine/complex.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

#include "relspine/errors.hpp"
#include "relspine/parallel.hpp"

namespace relspine {

Poset::Poset(std::vector<std::string> elements, const std::vector<std::pair<int, int>>& relations)
    : elements_(std::move(elements))
{
    const std::size_t n = elements_.size();
    less_.assign(n, std::vector<bool>(n, false));
    for (const auto& [a, b] : relations) {
        if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n)
            throw InputError("relation mentions an unknown element");
        less_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (less_[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (less_[k][j]) less_[i][j] = true;
    for (std::size_t i = 0; i < n; ++i)
        if (less_[i][i]) throw InputError("relation contains a cycle through " + elements_[i]);
}

std::vector<std::pair<int, int>> Poset::covers() const
{
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < size(); ++a)
        for (int b = 0; b < size(); ++b) {
            if (!less(a, b)) continue;
            bool between = false;
            for (int c = 0; c < size() && !between; ++c) between = less(a, c) && less(c, b);
            if (!between) out.emplace_back(a, b);
        }
    return out;
}

Poset Poset::induced(const std::vector<int>& subset) const
{
    std::vector<std::string> names;
    for (int i : subset) names.push_back(elements_.at(static_cast<std::size_t>(i)));
    std::vector<std::pair<int, int>> rel;
    for (std::size_t a = 0; a < subset.size(); ++a)
        for (std::size_t b = 0; b < subset.size(); ++b)
            if (less(subset[a], subset[b])) rel.emplace_back(static_cast<int>(a), static_cast<int>(b));
    return Poset(std::move(names), rel);
}

int Poset::index_of(const std::string& key) const
{
    const auto it = std::find(elements_.begin(), elements_.end(), key);
    return it == elements_.end() ? -1 : static_cast<int>(it - elements_.begin());
}

SimplicialComplex::SimplicialComplex(std::vector<std::string> vertices, std::vector<Face> faces) : vertices_(std::move(vertices))
{
    for (auto& f : faces) {
        std::sort(f.begin(), f.end());
        f.erase(std::unique(f.begin(), f.end()), f.end());
        for (int v : f)
            if (v < 0 || v >= num_vertices()) throw InputError("face uses an unknown vertex");
    }
    faces.erase(std::remove_if(faces.begin(), faces.end(), [](const Face& f) { return f.empty(); }), faces.end());
    std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) { return a.size() != b.size() ? a.size() > b.size() : a < b; });
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    for (const auto& f : faces) {
        const bool covered = std::any_of(maximal_.begin(), maximal_.end(), [&](const Face& m) {
            return std::includes(m.begin(), m.end(), f.begin(), f.end());
        });
        if (!covered) maximal_.push_back(f);
    }
    std::sort(maximal_.begin(), maximal_.end());
}

int SimplicialComplex::dimension() const
{
    if (maximal_.empty()) throw InputError("dimension of the empty complex");
    std::size_t best = 0;
    for (const auto& f : maximal_) best = std::max(best, f.size());
    return static_cast<int>(best) - 1;
}

std::vector<Face> SimplicialComplex::faces(int dim) const
{
    std::set<Face> out;
    const std::size_t size = static_cast<std::size_t>(dim + 1);
    for (const auto& m : maximal_) {
        if (m.size() < size) continue;
        if (m.size() > 30) throw InputError("face too large to enumerate subfaces");
        std::vector<bool> pick(m.size(), false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
        do {
            Face f;
            for (std::size_t i = 0; i < m.size(); ++i)
                if (pick[i]) f.push_back(m[i]);
            out.insert(std::move(f));
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return {out.begin(), out.end()};
}

std::vector<long long> SimplicialComplex::f_vector() const
{
    std::vector<long long> out;
    if (empty()) return out;
    for (int d = 0; d <= dimension(); ++d) out.push_back(static_cast<long long>(faces(d).size()));
    return out;
}

SimplicialComplex order_complex(const Poset& p)
{
    // Maximal chains by DFS from minimal elements along covers.
    const int n = p.size();
    std::vector<std::vector<int>> up(static_cast<std::size_t>(n));
    std::vector<bool> has_below(static_cast<std::size_t>(n), false);
    for (const auto& [a, b] : p.covers()) {
        up[static_cast<std::size_t>(a)].push_back(b);
        has_below[static_cast<std::size_t>(b)] = true;
    }
    std::vector<Face> chains;
    Face chain;
    std::function<void(int)> walk = [&](int x) {
        chain.push_back(x);
        if (up[static_cast<std::size_t>(x)].empty()) chains.push_back(chain);
        for (int y : up[static_cast<std::size_t>(x)]) walk(y);
        chain.pop_back();
    };
    for (int x = 0; x < n; ++x)
        if (!has_below[static_cast<std::size_t>(x)]) walk(x);
    return SimplicialComplex(p.elements(), std::move(chains));
}

SimplicialComplex clique_complex(std::vector<std::string> vertices, const std::vector<std::vector<bool>>& adjacent)
{
    const int n = static_cast<int>(vertices.size());
    std::vector<Face> cliques;
    Face current;
    // Bron-Kerbosch without pivoting; inputs are small.
    std::function<void(std::vector<int>, std::vector<int>)> bk = [&](std::vector<int> cand, std::vector<int> excluded) {
        if (cand.empty() && excluded.empty()) {
            if (!current.empty()) cliques.push_back(current);
            return;
        }
        while (!cand.empty()) {
            const int v = cand.front();
            std::vector<int> nc, nx;
            for (int u : cand)
                if (u != v && adjacent[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) nc.push_back(u);
            for (int u : excluded)
                if (adjacent[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) nx.push_back(u);
            current.push_back(v);
            bk(nc, nx);
            current.pop_back();
            cand.erase(cand.begin());
            excluded.push_back(v);
        }
    };
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    bk(all, {});
    return SimplicialComplex(std::move(vertices), std::move(cliques));
}

namespace {

using Matrix = std::vector<std::vector<long long>>;

long long checked(__int128 x)
{
    if (x > static_cast<__int128>(INT64_MAX) || x < -static_cast<__int128>(INT64_MAX))
        throw VerificationError("integer overflow in Smith normal form");
    return static_cast<long long>(x);
}

// Boundary map from dim-faces to (dim-1)-faces, rows indexed by the latter.
Matrix boundary(const std::vector<Face>& lower, const std::vector<Face>& upper)
{
    std::map<Face, std::size_t> index;
    for (std::size_t i = 0; i < lower.size(); ++i) index[lower[i]] = i;
    Matrix m(lower.size(), std::vector<long long>(upper.size(), 0));
    for (std::size_t c = 0; c < upper.size(); ++c)
        for (std::size_t drop = 0; drop < upper[c].size(); ++drop) {
            Face f = upper[c];
            f.erase(f.begin() + static_cast<std::ptrdiff_t>(drop));
            m[index.at(f)][c] = (drop % 2 == 0) ? 1 : -1;
        }
    return m;
}

}  // namespace

std::vector<long long> smith_invariants(Matrix a)
{
    std::vector<long long> diag;
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a.front().size();
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // Pivot: smallest nonzero absolute value in the trailing block.
        std::size_t pr = rows, pc = cols;
        long long best = 0;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
                    best = std::llabs(a[i][j]);
                    pr = i;
                    pc = j;
                    if (best == 1) break;
                }
        if (best == 0) break;
        std::swap(a[t], a[pr]);
        for (auto& row : a) std::swap(row[t], row[pc]);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (a[i][t] == 0) continue;
                const long long q = a[i][t] / a[t][t];
                for (std::size_t j = t; j < cols; ++j) a[i][j] = checked(static_cast<__int128>(a[i][j]) - static_cast<__int128>(q) * a[t][j]);
                if (a[i][t] != 0) {
                    std::swap(a[t], a[i]);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (a[t][j] == 0) continue;
                const long long q = a[t][j] / a[t][t];
                for (std::size_t i = t; i < rows; ++i) a[i][j] = checked(static_cast<__int128>(a[i][j]) - static_cast<__int128>(q) * a[i][t]);
                if (a[t][j] != 0) {
                    for (auto& row : a) std::swap(row[t], row[j]);
                    clean = false;
                }
            }
            if (!clean) continue;
            // Divisibility of the trailing block; otherwise fold the offending row in.
            for (std::size_t i = t + 1; i < rows && clean; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        for (std::size_t c = t; c < cols; ++c) a[t][c] = checked(static_cast<__int128>(a[t][c]) + a[i][c]);
                        clean = false;
                        break;
                    }
        }
        diag.push_back(std::llabs(a[t][t]));
        ++t;
    }
    return diag;
}

namespace {

// Eliminates unit pivots on a sparse column representation, then hands the
// remainder to the dense routine. Each unit pivot contributes an invariant 1.
std::vector<long long> sparse_smith_invariants(const std::vector<Face>& lower, const std::vector<Face>& upper)
{
    std::map<Face, int> index;
    for (std::size_t i = 0; i < lower.size(); ++i) index[lower[i]] = static_cast<int>(i);
    std::vector<std::map<int, long long>> cols(upper.size());
    std::vector<std::set<int>> rows(lower.size());
    for (std::size_t c = 0; c < upper.size(); ++c)
        for (std::size_t drop = 0; drop < upper[c].size(); ++drop) {
            Face f = upper[c];
            f.erase(f.begin() + static_cast<std::ptrdiff_t>(drop));
            const int r = index.at(f);
            cols[c][r] = (drop % 2 == 0) ? 1 : -1;
            rows[static_cast<std::size_t>(r)].insert(static_cast<int>(c));
        }
    std::vector<bool> alive(upper.size(), true);
    std::vector<long long> diag;
    for (;;) {
        int pc = -1, pr = -1;
        std::size_t best_col = SIZE_MAX, best_row = SIZE_MAX;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (!alive[c] || cols[c].empty() || cols[c].size() > best_col) continue;
            for (const auto& [r, v] : cols[c]) {
                if (std::llabs(v) != 1) continue;
                const std::size_t rs = rows[static_cast<std::size_t>(r)].size();
                if (cols[c].size() < best_col || rs < best_row) {
                    best_col = cols[c].size();
                    best_row = rs;
                    pc = static_cast<int>(c);
                    pr = r;
                }
            }
        }
        if (pc < 0) break;
        auto& pivot = cols[static_cast<std::size_t>(pc)];
        const long long pv = pivot.at(pr);
        const std::vector<int> others(rows[static_cast<std::size_t>(pr)].begin(), rows[static_cast<std::size_t>(pr)].end());
        for (int c2 : others) {
            if (c2 == pc) continue;
            auto& col = cols[static_cast<std::size_t>(c2)];
            const long long q = col.at(pr) * pv;  // pv = ±1, so this is the exact quotient
            for (const auto& [r, v] : pivot) {
                const long long x = checked(static_cast<__int128>(col[r]) - static_cast<__int128>(q) * v);
                if (x == 0) {
                    col.erase(r);
                    rows[static_cast<std::size_t>(r)].erase(c2);
                } else {
                    col[r] = x;
                    rows[static_cast<std::size_t>(r)].insert(c2);
                }
            }
        }
        for (const auto& [r, v] : pivot) rows[static_cast<std::size_t>(r)].erase(pc);
        pivot.clear();
        alive[static_cast<std::size_t>(pc)] = false;
        diag.push_back(1);
    }
    std::vector<int> live_rows;
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (!rows[r].empty()) live_rows.push_back(static_cast<int>(r));
    std::vector<int> live_cols;
    for (std::size_t c = 0; c < cols.size(); ++c)
        if (!cols[c].empty()) live_cols.push_back(static_cast<int>(c));
    if (!live_rows.empty() && !live_cols.empty()) {
        std::map<int, std::size_t> row_pos;
        for (std::size_t i = 0; i < live_rows.size(); ++i) row_pos[live_rows[i]] = i;
        Matrix m(live_rows.size(), std::vector<long long>(live_cols.size(), 0));
        for (std::size_t j = 0; j < live_cols.size(); ++j)
            for (const auto& [r, v] : cols[static_cast<std::size_t>(live_cols[j])]) m[row_pos.at(r)][j] = v;
        for (long long x : smith_invariants(std::move(m))) diag.push_back(x);
    }
    std::sort(diag.begin(), diag.end());
    return diag;
}

}  // namespace

Homology homology(const SimplicialComplex& c, bool parallel)
{
    Homology h;
    if (c.empty()) return h;
    const int top = c.dimension();
    std::vector<std::vector<Face>> faces(static_cast<std::size_t>(top + 1));
    for (int d = 0; d <= top; ++d) faces[static_cast<std::size_t>(d)] = c.faces(d);
    // invariants[d] belongs to the boundary from dimension d to d-1.
    std::vector<std::vector<long long>> invariants(static_cast<std::size_t>(top + 2));
    parallel_for(
        static_cast<std::size_t>(top),
        [&](std::size_t i) {
            const std::size_t d = i + 1;
            invariants[d] = sparse_smith_invariants(faces[d - 1], faces[d]);
        },
        parallel);
    for (int d = 0; d <= top; ++d) {
        const long long rank_out = static_cast<long long>(invariants[static_cast<std::size_t>(d)].size());
        const long long rank_in = static_cast<long long>(invariants[static_cast<std::size_t>(d + 1)].size());
        h.betti.push_back(static_cast<long long>(faces[static_cast<std::size_t>(d)].size()) - rank_out - rank_in);
        std::vector<long long> tors;
        for (long long x : invariants[static_cast<std::size_t>(d + 1)])
            if (x > 1) tors.push_back(x);
        if (!tors.empty()) h.torsion.emplace_back(d, std::move(tors));
    }
    return h;
}

std::vector<long long> rational_betti(const SimplicialComplex& c)
{
    using boost::multiprecision::cpp_rational;
    std::vector<long long> betti;
    if (c.empty()) return betti;
    const int top = c.dimension();
    std::vector<std::vector<Face>> faces(static_cast<std::size_t>(top + 1));
    for (int d = 0; d <= top; ++d) faces[static_cast<std::size_t>(d)] = c.faces(d);
    auto rank_of = [](const Matrix& m) {
        std::vector<std::vector<cpp_rational>> a;
        for (const auto& row : m) a.emplace_back(row.begin(), row.end());
        long long r = 0;
        const std::size_t rows = a.size();
        const std::size_t cols = rows == 0 ? 0 : a.front().size();
        for (std::size_t col = 0; col < cols && static_cast<std::size_t>(r) < rows; ++col) {
            std::size_t piv = static_cast<std::size_t>(r);
            while (piv < rows && a[piv][col] == 0) ++piv;
            if (piv == rows) continue;
            std::swap(a[piv], a[static_cast<std::size_t>(r)]);
            for (std::size_t i = 0; i < rows; ++i) {
                if (i == static_cast<std::size_t>(r) || a[i][col] == 0) continue;
                const cpp_rational q = a[i][col] / a[static_cast<std::size_t>(r)][col];
                for (std::size_t j = col; j < cols; ++j) a[i][j] -= q * a[static_cast<std::size_t>(r)][j];
            }
            ++r;
        }
        return r;
    };
    std::vector<long long> ranks(static_cast<std::size_t>(top + 2), 0);
    for (int d = 1; d <= top; ++d)
        ranks[static_cast<std::size_t>(d)] = rank_of(boundary(faces[static_cast<std::size_t>(d - 1)], faces[static_cast<std::size_t>(d)]));
    for (int d = 0; d <= top; ++d)
        betti.push_back(static_cast<long long>(faces[static_cast<std::size_t>(d)].size()) - ranks[static_cast<std::size_t>(d)] -
                        ranks[static_cast<std::size_t>(d + 1)]);
    return betti;
}

bool is_acyclic(const Homology& h)
{
    if (h.betti.empty() || h.betti.front() != 1 || !h.torsion.empty()) return false;
    return std::all_of(h.betti.begin() + 1, h.betti.end(), [](long long b) { return b == 0; });
}

CollapseReport collapse_greedy(const SimplicialComplex& c)
{
    CollapseReport report;
    if (c.num_vertices() > 64) throw InputError("collapse checker supports at most 64 vertices");
    using Mask = std::uint64_t;
    std::set<Mask> faces;
    for (const auto& m : c.maximal_faces()) {
        if (m.size() > 24) throw InputError("face too large for the collapse checker");
        Mask full = 0;
        for (int v : m) full |= Mask{1} << v;
        for (Mask sub = full; sub != 0; sub = (sub - 1) & full) faces.insert(sub);
    }
    auto to_face = [](Mask m) {
        Face f;
        for (int v = 0; v < 64; ++v)
            if (m & (Mask{1} << v)) f.push_back(v);
        return f;
    };
    auto cofaces = [&](Mask f) {
        std::vector<Mask> out;
        for (int v = 0; v < c.num_vertices(); ++v) {
            const Mask bit = Mask{1} << v;
            if (!(f & bit) && faces.count(f | bit)) out.push_back(f | bit);
        }
        return out;
    };
    // Larger faces first, then by mask, so the sequence is deterministic.
    auto order = [](Mask a, Mask b) {
        const int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa > pb : a < b;
    };
    std::set<Mask, decltype(order)> queue(order);
    queue.insert(faces.begin(), faces.end());
    while (!queue.empty()) {
        const Mask f = *queue.begin();
        queue.erase(queue.begin());
        if (!faces.count(f)) continue;
        const auto up = cofaces(f);
        if (up.size() != 1 || !cofaces(up.front()).empty()) continue;
        const Mask top = up.front();
        faces.erase(f);
        faces.erase(top);
        report.sequence.emplace_back(to_face(f), to_face(top));
        for (int v = 0; v < 64; ++v) {
            const Mask bit = Mask{1} << v;
            if ((top & bit) && (top ^ bit) != 0 && faces.count(top ^ bit)) queue.insert(top ^ bit);
            if ((f & bit) && (f ^ bit) != 0 && faces.count(f ^ bit)) queue.insert(f ^ bit);
        }
    }
    report.collapsible = faces.size() == 1;
    std::vector<Face> left;
    for (Mask f : faces) {
        if (cofaces(f).empty()) left.push_back(to_face(f));
    }
    std::sort(left.begin(), left.end());
    report.remainder = std::move(left);
    return report;
}

}  // namespace relspine
