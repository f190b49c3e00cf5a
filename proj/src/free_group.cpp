#include "relspine/free_group.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "relspine/errors.hpp"

namespace relspine {

// ---------------------------------------------------------------- BasisSpec

BasisSpec::BasisSpec(int n, std::vector<int> factor_ranks) : n_(n)
{
    if (n < 1) throw InputError("rank must be positive");
    std::vector<int> order(factor_ranks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_partition(order.begin(), order.end(),
                          [&](int idx) { return factor_ranks[static_cast<std::size_t>(idx)] > 1; });
    for (int idx : order) {
        int r = factor_ranks[static_cast<std::size_t>(idx)];
        if (r < 1) throw InputError("factor ranks must be >= 1");
        offsets_.push_back(total_);
        s_.push_back(r);
        original_.push_back(idx);
        total_ += r;
    }
    if (total_ > n_) throw InputError("sum of factor ranks exceeds n");
}

int BasisSpec::num_cyclic_factors() const
{
    return static_cast<int>(std::count(s_.begin(), s_.end(), 1));
}

int BasisSpec::factor_of(int generator) const
{
    if (generator < 0 || generator >= n_) throw InputError("generator index out of range");
    for (std::size_t j = 0; j < s_.size(); ++j)
        if (generator >= offsets_[j] && generator < offsets_[j] + s_[j]) return static_cast<int>(j);
    return -1;
}

std::string BasisSpec::generator_name(int generator) const
{
    int j = factor_of(generator);
    if (j < 0) return "x" + std::to_string(generator - total_ + 1);
    return "y" + std::to_string(generator - offsets_[static_cast<std::size_t>(j)] + 1) + "_" + std::to_string(j + 1);
}

int BasisSpec::generator_from_name(const std::string& name) const
{
    auto bad = [&]() -> InputError { return InputError("unknown generator '" + name + "'"); };
    try {
        if (name.size() >= 2 && name[0] == 'x') {
            std::size_t used = 0;
            int i = std::stoi(name.substr(1), &used);
            if (used != name.size() - 1 || i < 1 || i > num_free()) throw bad();
            return x(i - 1);
        }
        if (name.size() >= 4 && name[0] == 'y') {
            auto us = name.find('_');
            if (us == std::string::npos) throw bad();
            std::size_t used_i = 0, used_j = 0;
            int i = std::stoi(name.substr(1, us - 1), &used_i);
            int j = std::stoi(name.substr(us + 1), &used_j);
            if (used_i != us - 1 || used_j != name.size() - us - 1) throw bad();
            if (j < 1 || j > num_factors() || i < 1 || i > s_[static_cast<std::size_t>(j - 1)]) throw bad();
            return y(j - 1, i - 1);
        }
    } catch (const std::logic_error&) {
        throw bad();
    }
    throw bad();
}

// --------------------------------------------------------------------- Word

namespace {

std::vector<Letter> freely_reduce(std::span<const Letter> letters)
{
    std::vector<Letter> out;
    out.reserve(letters.size());
    for (Letter a : letters) {
        if (a == 0) throw InputError("zero is not a letter");
        if (!out.empty() && out.back() == -a)
            out.pop_back();
        else
            out.push_back(a);
    }
    return out;
}

}  // namespace

Word::Word(std::span<const Letter> letters) : letters_(freely_reduce(letters)) {}

Word::Word(std::initializer_list<Letter> letters)
    : letters_(freely_reduce(std::span<const Letter>(letters.begin(), letters.size())))
{
}

Word Word::inverse() const
{
    std::vector<Letter> inv(letters_.rbegin(), letters_.rend());
    for (Letter& a : inv) a = -a;
    Word w;
    w.letters_ = std::move(inv);
    return w;
}

Word Word::operator*(const Word& rhs) const
{
    std::vector<Letter> out = letters_;
    std::size_t i = 0;
    while (!out.empty() && i < rhs.letters_.size() && out.back() == -rhs.letters_[i]) {
        out.pop_back();
        ++i;
    }
    out.insert(out.end(), rhs.letters_.begin() + static_cast<std::ptrdiff_t>(i), rhs.letters_.end());
    Word w;
    w.letters_ = std::move(out);
    return w;
}

Word Word::power(int e) const
{
    Word base = e < 0 ? inverse() : *this;
    Word result;
    for (int i = 0; i < std::abs(e); ++i) result = result * base;
    return result;
}

Word Word::conjugated_by(const Word& w) const { return w * *this * w.inverse(); }

Word Word::prefix(std::size_t len) const
{
    Word w;
    w.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(std::min(len, letters_.size())));
    return w;
}

Word reduce(std::span<const Letter> letters, const BasisSpec& basis)
{
    for (Letter a : letters)
        if (a == 0 || generator_of(a) >= basis.rank())
            throw InputError("letter " + std::to_string(a) + " does not name a generator of F_" +
                             std::to_string(basis.rank()));
    return Word(letters);
}

CyclicDecomposition cyclic_reduce(const Word& w)
{
    const auto& l = w.letters();
    std::size_t lo = 0, hi = l.size();
    while (hi - lo >= 2 && l[lo] == -l[hi - 1]) {
        ++lo;
        --hi;
    }
    std::vector<Letter> core(l.begin() + static_cast<std::ptrdiff_t>(lo), l.begin() + static_cast<std::ptrdiff_t>(hi));
    return {Word(core), w.prefix(lo)};
}

bool cyclically_equal(const Word& a, const Word& b)
{
    if (a.length() != b.length()) return false;
    if (a.empty()) return true;
    const auto& x = a.letters();
    const auto& y = b.letters();
    for (std::size_t t = 0; t < x.size(); ++t) {
        bool same = true;
        for (std::size_t i = 0; i < x.size() && same; ++i) same = x[(i + t) % x.size()] == y[i];
        if (same) return true;
    }
    return false;
}

Word primitive_root(const Word& w)
{
    const auto& l = w.letters();
    const std::size_t n = l.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool periodic = true;
        for (std::size_t i = d; i < n && periodic; ++i) periodic = l[i] == l[i - d];
        if (periodic) return w.prefix(d);
    }
    return w;
}

std::string to_string(const Word& w, const BasisSpec& basis)
{
    if (w.empty()) return "1";
    std::string out;
    for (Letter a : w.letters()) {
        if (!out.empty()) out += ' ';
        out += basis.generator_name(generator_of(a));
        if (a < 0) out += "^-1";
    }
    return out;
}

Word parse_word(const std::string& text, const BasisSpec& basis)
{
    std::vector<Letter> letters;
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), '*', ' ');
    std::istringstream in(normalized);
    std::string token;
    while (in >> token) {
        if (token == "1") continue;
        bool inv = false;
        if (token.size() > 3 && token.ends_with("^-1")) {
            inv = true;
            token.resize(token.size() - 3);
        }
        letters.push_back(letter_of(basis.generator_from_name(token), inv));
    }
    return Word(letters);
}

// ------------------------------------------------------------- Automorphism

Automorphism::Automorphism(BasisSpec basis, std::vector<Word> images)
    : basis_(std::move(basis)), images_(std::move(images))
{
    if (static_cast<int>(images_.size()) != basis_.rank())
        throw InputError("automorphism needs one image per generator");
    for (const auto& w : images_)
        for (Letter a : w.letters())
            if (generator_of(a) >= basis_.rank()) throw InputError("image uses a letter outside the basis");
}

Automorphism Automorphism::identity(const BasisSpec& basis)
{
    std::vector<Word> images;
    for (int g = 0; g < basis.rank(); ++g) images.push_back(Word{letter_of(g)});
    return {basis, std::move(images)};
}

Automorphism Automorphism::conjugation(const BasisSpec& basis, const Word& w)
{
    std::vector<Word> images;
    for (int g = 0; g < basis.rank(); ++g) images.push_back(Word{letter_of(g)}.conjugated_by(w));
    return {basis, std::move(images)};
}

Word apply(const Automorphism& f, const Word& w)
{
    Word out;
    for (Letter a : w.letters()) {
        int g = generator_of(a);
        if (g >= f.basis().rank()) throw InputError("word uses a letter outside the basis");
        out = out * (a > 0 ? f.image(g) : f.image(g).inverse());
    }
    return out;
}

Automorphism compose(const Automorphism& f, const Automorphism& g)
{
    if (!(f.basis() == g.basis())) throw InputError("basis mismatch in compose");
    std::vector<Word> images;
    images.reserve(g.images().size());
    for (const auto& w : g.images()) images.push_back(apply(f, w));
    return {f.basis(), std::move(images)};
}

NielsenResult nielsen_reduce(const Automorphism& f)
{
    const BasisSpec& basis = f.basis();
    const int n = basis.rank();
    std::vector<Word> u = f.images();
    Automorphism tracked = Automorphism::identity(basis);
    auto total = [](const std::vector<Word>& t) {
        std::size_t s = 0;
        for (const auto& w : t) s += w.length();
        return s;
    };

    NielsenResult result;
    for (;;) {
        if (std::any_of(u.begin(), u.end(), [](const Word& w) { return w.empty(); })) {
            result.verdict = NielsenVerdict::not_basis;
            result.reduced_images = u;
            return result;
        }
        std::size_t best_len = total(u);
        int best_i = -1, best_l = -1, best_sign = 0;
        bool best_right = true;
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l) {
                if (i == l) continue;
                for (int sign : {1, -1})
                    for (bool right : {true, false}) {
                        Word other = sign > 0 ? u[static_cast<std::size_t>(l)] : u[static_cast<std::size_t>(l)].inverse();
                        Word cand = right ? u[static_cast<std::size_t>(i)] * other : other * u[static_cast<std::size_t>(i)];
                        std::size_t len = total(u) - u[static_cast<std::size_t>(i)].length() + cand.length();
                        if (len < best_len) {
                            best_len = len;
                            best_i = i;
                            best_l = l;
                            best_sign = sign;
                            best_right = right;
                        }
                    }
            }
        if (best_i < 0) break;
        std::vector<Word> move_images;
        for (int g = 0; g < n; ++g) move_images.push_back(Word{letter_of(g)});
        Word gl{letter_of(best_l, best_sign < 0)};
        auto& target = move_images[static_cast<std::size_t>(best_i)];
        target = best_right ? target * gl : gl * target;
        Automorphism move(basis, move_images);
        tracked = compose(tracked, move);
        u = compose(f, tracked).images();
    }
    result.reduced_images = u;
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    bool permutation = true;
    for (const auto& w : u) {
        if (w.length() != 1) {
            permutation = false;
            break;
        }
        seen[static_cast<std::size_t>(generator_of(w.letters()[0]))]++;
    }
    if (permutation) {
        if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
            result.verdict = NielsenVerdict::not_basis;
            return result;
        }
        // f o tracked = pi, so f^-1 = tracked o pi^-1.
        std::vector<Word> pi_inv(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            Letter a = u[static_cast<std::size_t>(i)].letters()[0];
            pi_inv[static_cast<std::size_t>(generator_of(a))] = Word{letter_of(i, a < 0)};
        }
        result.verdict = NielsenVerdict::basis;
        result.inverse = compose(tracked, Automorphism(basis, pi_inv));
    }
    return result;
}

Automorphism inverse(const Automorphism& f)
{
    auto r = nielsen_reduce(f);
    if (r.verdict != NielsenVerdict::basis || !r.inverse)
        throw VerificationError("could not invert automorphism by Nielsen reduction");
    return *r.inverse;
}

Automorphism power(const Automorphism& f, int e)
{
    Automorphism base = e < 0 ? inverse(f) : f;
    Automorphism out = Automorphism::identity(f.basis());
    for (int i = 0; i < std::abs(e); ++i) out = compose(out, base);
    return out;
}

// ------------------------------------------------------------ conjugation

std::optional<Word> find_conjugator(std::span<const Word> sources, std::span<const Word> targets)
{
    if (sources.size() != targets.size()) return std::nullopt;
    auto verify = [&](const Word& w) {
        for (std::size_t g = 0; g < sources.size(); ++g)
            if (sources[g].conjugated_by(w) != targets[g]) return false;
        return true;
    };
    std::size_t first = sources.size();
    for (std::size_t g = 0; g < sources.size(); ++g)
        if (!sources[g].empty()) {
            first = g;
            break;
        }
    if (first == sources.size()) {
        Word id;
        return verify(id) ? std::optional<Word>(id) : std::nullopt;
    }
    auto [c, p] = cyclic_reduce(sources[first]);
    auto [c2, q] = cyclic_reduce(targets[first]);
    if (c.length() != c2.length()) return std::nullopt;

    // z c z^-1 = c2 with z = alpha^-1 where c = alpha beta, c2 = beta alpha.
    std::optional<Word> z0;
    for (std::size_t t = 0; t < c.length() && !z0; ++t) {
        std::vector<Letter> rot(c.letters().begin() + static_cast<std::ptrdiff_t>(t), c.letters().end());
        rot.insert(rot.end(), c.letters().begin(), c.letters().begin() + static_cast<std::ptrdiff_t>(t));
        if (rot == c2.letters()) z0 = c.prefix(t).inverse();
    }
    if (!z0) return std::nullopt;
    const Word root = primitive_root(c2);
    const Word head = q;
    const Word tail = *z0 * p.inverse();

    // w = head * root^e * tail; e is bounded by the lengths of the other pairs.
    std::size_t bound = 2;
    for (std::size_t g = 0; g < sources.size(); ++g) {
        Word x = sources[g].conjugated_by(tail);
        Word y = targets[g].conjugated_by(head.inverse());
        bound = std::max(bound, x.length() + y.length() + 2);
    }
    for (long e = 0; e <= static_cast<long>(bound); ++e) {
        for (int sign : {1, -1}) {
            if (e == 0 && sign < 0) continue;
            Word w = head * root.power(static_cast<int>(sign * e)) * tail;
            if (verify(w)) return w;
        }
    }
    return std::nullopt;
}

std::optional<Word> is_inner(const Automorphism& f)
{
    const BasisSpec& basis = f.basis();
    std::set<std::pair<std::size_t, Word>> candidates;
    for (int g = 0; g < basis.rank(); ++g) {
        const Word& img = f.image(g);
        const Word shifted = img * Word{letter_of(g, true)};
        for (const Word* w : {&img, &shifted})
            for (std::size_t len = 0; len <= w->length(); ++len) {
                Word pre = w->prefix(len);
                candidates.insert({pre.length(), pre});
            }
    }
    for (const auto& [len, w] : candidates) {
        bool ok = true;
        for (int g = 0; g < basis.rank() && ok; ++g) ok = Word{letter_of(g)}.conjugated_by(w) == f.image(g);
        if (ok) return w;
    }
    return std::nullopt;
}

std::optional<std::vector<Word>> is_relative(const Automorphism& f)
{
    const BasisSpec& basis = f.basis();
    std::vector<Word> witnesses;
    for (int j = 0; j < basis.num_factors(); ++j) {
        std::vector<Word> src, dst;
        for (int i = 0; i < basis.factor_rank(j); ++i) {
            src.push_back(Word{letter_of(basis.y(j, i))});
            dst.push_back(f.image(basis.y(j, i)));
        }
        auto w = find_conjugator(src, dst);
        if (!w) return std::nullopt;
        witnesses.push_back(*w);
    }
    return witnesses;
}

// --------------------------------------------------------- witness subgroup

std::vector<NamedAutomorphism> vcd_generators(const BasisSpec& basis)
{
    const int k = basis.num_factors();
    if (k == 0) throw InputError("vcd generators need at least one free factor");
    const int m = basis.num_cyclic_factors();
    const Word y{letter_of(basis.y(0, 0))};
    const Automorphism id = Automorphism::identity(basis);
    std::vector<NamedAutomorphism> out;
    auto modified = [&](auto&& edit) {
        std::vector<Word> images = id.images();
        edit(images);
        return Automorphism(basis, std::move(images));
    };
    for (int i = 0; i < basis.num_free(); ++i)
        out.push_back({"alpha_" + std::to_string(i + 1),
                       modified([&](auto& im) { im[static_cast<std::size_t>(basis.x(i))] = y * im[static_cast<std::size_t>(basis.x(i))]; })});
    for (int i = 0; i < basis.num_free(); ++i)
        out.push_back({"beta_" + std::to_string(i + 1),
                       modified([&](auto& im) { im[static_cast<std::size_t>(basis.x(i))] = im[static_cast<std::size_t>(basis.x(i))] * y.inverse(); })});
    for (int j = 1; j < k; ++j)
        out.push_back({"gamma_" + std::to_string(j + 1), modified([&](auto& im) {
                           for (int p = 0; p < basis.factor_rank(j); ++p) {
                               auto& w = im[static_cast<std::size_t>(basis.y(j, p))];
                               w = w.conjugated_by(y);
                           }
                       })});
    for (int r = 1; r < k - m; ++r) {
        const Word yr{letter_of(basis.y(r, 0))};
        out.push_back({"delta_" + std::to_string(r + 1), modified([&](auto& im) {
                           for (int p = 0; p < basis.factor_rank(r); ++p) {
                               auto& w = im[static_cast<std::size_t>(basis.y(r, p))];
                               w = w.conjugated_by(yr);
                           }
                       })});
    }
    return out;
}

int vcd_witness_rank(const BasisSpec& basis)
{
    return 2 * basis.rank() - 2 * basis.factor_total() + 2 * basis.num_factors() - 2 - basis.num_cyclic_factors();
}

AbelianWitnessReport verify_abelian_witness(const std::vector<NamedAutomorphism>& gens, int exponent_bound)
{
    if (exponent_bound < 1) throw InputError("exponent bound must be >= 1");
    AbelianWitnessReport report;
    report.generator_count = static_cast<int>(gens.size());
    report.exponent_bound = exponent_bound;
    if (gens.empty()) return report;

    const BasisSpec& basis = gens.front().map.basis();
    for (const auto& g : gens) {
        if (!(g.map.basis() == basis)) throw InputError("generators over different bases");
        if (!is_relative(g.map)) throw InputError("generator " + g.name + " is not a relative automorphism");
    }

    std::vector<Automorphism> inverses;
    for (const auto& g : gens) inverses.push_back(inverse(g.map));
    const Automorphism id = Automorphism::identity(basis);
    for (std::size_t a = 0; a < gens.size(); ++a)
        for (std::size_t b = a + 1; b < gens.size(); ++b) {
            Automorphism comm = compose(compose(gens[a].map, gens[b].map), compose(inverses[a], inverses[b]));
            if (!(comm == id)) {
                report.commutators_trivial = false;
                report.noncommuting_pairs.emplace_back(gens[a].name, gens[b].name);
            }
        }

    if (basis.num_factors() > 0 && basis.factor_rank(0) == 1) {
        auto canonical = vcd_generators(basis);
        bool same = canonical.size() == gens.size();
        for (std::size_t i = 0; same && i < gens.size(); ++i)
            same = canonical[i].name == gens[i].name && canonical[i].map == gens[i].map;
        if (same)
            for (const auto& g : gens) report.relation.push_back(g.name.starts_with("delta") ? 0 : 1);
    }

    const int r = static_cast<int>(gens.size());
    const int b = exponent_bound;
    std::vector<std::vector<Automorphism>> powers(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (int e = -b; e <= b; ++e) powers[i].push_back(e < 0 ? power(inverses[i], -e) : power(gens[i].map, e));

    std::vector<int> e(static_cast<std::size_t>(r), -b);
    for (;;) {
        if (std::any_of(e.begin(), e.end(), [](int v) { return v != 0; })) {
            Automorphism prod = id;
            for (int i = 0; i < r; ++i) prod = compose(prod, powers[static_cast<std::size_t>(i)][static_cast<std::size_t>(e[static_cast<std::size_t>(i)] + b)]);
            ++report.products_checked;
            if (is_inner(prod)) {
                report.inner_products.push_back(e);
                bool explained = false;
                if (!report.relation.empty()) {
                    int t = 0;
                    for (int i = 0; i < r; ++i)
                        if (report.relation[static_cast<std::size_t>(i)] != 0) {
                            t = e[static_cast<std::size_t>(i)];
                            break;
                        }
                    explained = true;
                    for (int i = 0; i < r; ++i)
                        explained = explained && e[static_cast<std::size_t>(i)] == t * report.relation[static_cast<std::size_t>(i)];
                }
                if (!explained) report.unexpected_inner.push_back(e);
            }
        }
        int pos = 0;
        while (pos < r && e[static_cast<std::size_t>(pos)] == b) e[static_cast<std::size_t>(pos++)] = -b;
        if (pos == r) break;
        ++e[static_cast<std::size_t>(pos)];
    }
    return report;
}

}  // namespace relspine
