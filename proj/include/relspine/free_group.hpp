#pragma once

// Words and automorphisms of a free group F_n whose basis is split into
// free-factor blocks y_i^j (factor j, 1 <= i <= s(j)) followed by free
// generators x_1 .. x_{n - sum s}.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace relspine {

/// Signed generator: +(g+1) is generator g, -(g+1) its inverse. Zero is invalid.
using Letter = int;

inline constexpr Letter inverse_letter(Letter a) { return -a; }
inline constexpr int generator_of(Letter a) { return (a > 0 ? a : -a) - 1; }
inline constexpr Letter letter_of(int generator, bool inverted = false)
{
    return inverted ? -(generator + 1) : generator + 1;
}

/// Rank n plus factor ranks s(1..k). Factors are stored with every rank-1
/// factor after the higher-rank ones (stable reorder), so the last m factors
/// are exactly the cyclic ones.
class BasisSpec {
public:
    BasisSpec() = default;
    BasisSpec(int n, std::vector<int> factor_ranks);

    int rank() const { return n_; }
    int num_factors() const { return static_cast<int>(s_.size()); }
    const std::vector<int>& factor_ranks() const { return s_; }
    int factor_rank(int j) const { return s_.at(static_cast<std::size_t>(j)); }
    int factor_total() const { return total_; }
    int num_free() const { return n_ - total_; }
    /// Number of factors of rank one.
    int num_cyclic_factors() const;

    /// Generator index of y_i^j (0-based i, j).
    int y(int j, int i) const { return offsets_.at(static_cast<std::size_t>(j)) + i; }
    /// Generator index of x_i (0-based i).
    int x(int i) const { return total_ + i; }
    /// Factor owning the generator, or -1 for a free generator.
    int factor_of(int generator) const;

    std::string generator_name(int generator) const;
    int generator_from_name(const std::string& name) const;

    /// Original position of each stored factor in the constructor argument.
    const std::vector<int>& original_factor_index() const { return original_; }

    bool operator==(const BasisSpec& other) const { return n_ == other.n_ && s_ == other.s_; }

private:
    int n_ = 0;
    std::vector<int> s_;
    std::vector<int> offsets_;
    std::vector<int> original_;
    int total_ = 0;
};

/// Freely reduced word. The empty word is the identity.
class Word {
public:
    Word() = default;
    /// Reduces the given letters; throws InputError on a zero letter.
    explicit Word(std::span<const Letter> letters);
    Word(std::initializer_list<Letter> letters);

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    Word inverse() const;
    Word operator*(const Word& rhs) const;
    Word power(int e) const;
    /// w * this * w^-1
    Word conjugated_by(const Word& w) const;
    /// Prefix of the given length (already reduced).
    Word prefix(std::size_t len) const;

    auto operator<=>(const Word&) const = default;

private:
    std::vector<Letter> letters_;
};

/// Free reduction of a raw letter sequence; checks that every letter names a
/// generator of the basis.
Word reduce(std::span<const Letter> letters, const BasisSpec& basis);

struct CyclicDecomposition {
    Word core;        ///< cyclically reduced
    Word conjugator;  ///< w = conjugator * core * conjugator^-1
};
CyclicDecomposition cyclic_reduce(const Word& w);

/// True when the cyclic words of a and b agree (a is a rotation of b).
bool cyclically_equal(const Word& a, const Word& b);

/// Smallest root r with w = r^k for cyclically reduced w.
Word primitive_root(const Word& cyclically_reduced);

std::string to_string(const Word& w, const BasisSpec& basis);
Word parse_word(const std::string& text, const BasisSpec& basis);

/// Endomorphism of F_n given by generator images. Invertibility is not
/// checked at construction.
class Automorphism {
public:
    Automorphism() = default;
    Automorphism(BasisSpec basis, std::vector<Word> images);
    static Automorphism identity(const BasisSpec& basis);
    /// x -> w x w^-1 for every generator.
    static Automorphism conjugation(const BasisSpec& basis, const Word& w);

    const BasisSpec& basis() const { return basis_; }
    const std::vector<Word>& images() const { return images_; }
    const Word& image(int generator) const { return images_.at(static_cast<std::size_t>(generator)); }

    bool operator==(const Automorphism& other) const
    {
        return basis_ == other.basis_ && images_ == other.images_;
    }

private:
    BasisSpec basis_;
    std::vector<Word> images_;
};

Word apply(const Automorphism& f, const Word& w);
/// (f o g)(x) = f(g(x)). Throws InputError on a basis mismatch.
Automorphism compose(const Automorphism& f, const Automorphism& g);

enum class NielsenVerdict { basis, not_basis, inconclusive };
struct NielsenResult {
    NielsenVerdict verdict = NielsenVerdict::inconclusive;
    std::optional<Automorphism> inverse;
    std::vector<Word> reduced_images;
};
/// Greedy length-reducing Nielsen moves on the image tuple. A tuple reduced
/// to a signed permutation certifies an automorphism and yields its inverse;
/// an image reduced to the empty word certifies a non-basis.
NielsenResult nielsen_reduce(const Automorphism& f);
/// Inverse via Nielsen reduction; throws VerificationError when inconclusive.
Automorphism inverse(const Automorphism& f);
Automorphism power(const Automorphism& f, int e);

/// w with targets[g] = w * sources[g] * w^-1 for every g, if one exists.
/// Complete: the conjugator is pinned down up to the centralizer of the
/// first nontrivial source and the remaining freedom is searched with an
/// explicit length bound.
std::optional<Word> find_conjugator(std::span<const Word> sources, std::span<const Word> targets);

/// Inner-witness search over candidate prefixes of f(g) and f(g) g^-1.
std::optional<Word> is_inner(const Automorphism& f);

/// Per-factor conjugators u_j with f(y) = u_j y u_j^-1 for every y in factor j.
std::optional<std::vector<Word>> is_relative(const Automorphism& f);

struct NamedAutomorphism {
    std::string name;  ///< alpha_1, beta_1, gamma_2, delta_2 ...
    Automorphism map;
};

/// Free abelian witness subgroup generators alpha_i, beta_i, gamma_j, delta_r.
/// Throws InputError when the basis has no factors.
std::vector<NamedAutomorphism> vcd_generators(const BasisSpec& basis);
/// Expected rank of the witness subgroup image in Out: 2n - 2 sum s + 2k - 2 - m.
int vcd_witness_rank(const BasisSpec& basis);

struct AbelianWitnessReport {
    int generator_count = 0;
    int exponent_bound = 0;
    bool all_relative = true;
    bool commutators_trivial = true;
    std::vector<std::pair<std::string, std::string>> noncommuting_pairs;
    long long products_checked = 0;
    /// Exponent vectors whose product is inner.
    std::vector<std::vector<int>> inner_products;
    /// Exponent vector of the known relation (all alpha, beta, gamma), when
    /// conjugation by y_1^1 fixes the first factor; empty otherwise.
    std::vector<int> relation;
    /// Inner products not explained by multiples of the relation.
    std::vector<std::vector<int>> unexpected_inner;
    bool passed() const { return all_relative && commutators_trivial && unexpected_inner.empty(); }
};
/// Commutator and bounded independence check. The relation vector is only
/// consulted if gens are exactly vcd_generators(basis) in order.
AbelianWitnessReport verify_abelian_witness(const std::vector<NamedAutomorphism>& gens, int exponent_bound);

}  // namespace relspine
