// Word enumeration over a symmetric generating set, growth statistics,
// and exponentially decaying weight tables with certified truncation tails.
//
// Letters are small integers 0..2k-1; letter 2i is the i-th generator and
// letter 2i+1 its inverse, so `letter ^ 1` flips a letter. Words are kept
// freely reduced at all times. The canonical order on words is by length,
// then lexicographically by letter index; every weighted sum over words in
// this library is formed sphere by sphere in that order, which makes all
// reported numbers reproducible across runs and thread counts.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace bilip {

using Letter = std::int16_t;

inline Letter inverse_letter(Letter l) { return static_cast<Letter>(l ^ 1); }

// A freely reduced word. The empty word is the group identity.
class GroupWord {
public:
    GroupWord() = default;

    // Throws std::invalid_argument if `letters` is not reduced.
    explicit GroupWord(std::vector<Letter> letters);

    // Free reduction: repeatedly cancels adjacent inverse pairs.
    static GroupWord reduce(const std::vector<Letter>& letters);

    static GroupWord identity() { return GroupWord{}; }

    int length() const { return static_cast<int>(letters_.size()); }
    bool empty() const { return letters_.empty(); }
    const std::vector<Letter>& letters() const { return letters_; }

    GroupWord inverse() const;

    // Reduced concatenation: this * other with boundary cancellation.
    GroupWord concat(const GroupWord& other) const;

    // Appends one letter; requires that it does not cancel the last letter.
    GroupWord append(Letter l) const;

    bool operator==(const GroupWord& other) const { return letters_ == other.letters_; }
    bool operator!=(const GroupWord& other) const { return !(*this == other); }

    // Canonical order: length first, then lexicographic on letter indices.
    bool operator<(const GroupWord& other) const;

    std::string str(const std::vector<std::string>& labels) const;

private:
    std::vector<Letter> letters_;
};

enum class EnumerationMode { Free, Dedup };

// A symmetric generating set with k generator/inverse pairs.
struct GeneratorSet {
    int k = 0;
    std::vector<std::string> labels;  // 2k entries, [2i] generator, [2i+1] inverse
    EnumerationMode mode = EnumerationMode::Free;

    static GeneratorSet free_group(int k);
    static GeneratorSet dedup_group(int k);

    int alphabet_size() const { return 2 * k; }
    void validate() const;

    // log(2k-1), the growth rate of reduced words; 0 for k <= 1.
    double exponent_upper_bound() const;
};

// Caller-supplied word equality. Used only in Dedup mode; must be a
// congruence on the enumerated ball for representative pruning to be sound.
struct ElementResolver {
    std::string name;
    std::function<bool(const GroupWord&, const GroupWord&)> same;

    // Equality of abelianized letter-count vectors (exact; suits free
    // abelian quotients such as Z^k).
    static ElementResolver abelianized(int k);
};

struct BallEnumeration {
    std::vector<GroupWord> words;              // canonical order
    std::vector<std::uint64_t> sphere_counts;  // [0..radius]

    std::uint64_t ball_size() const { return words.size(); }
};

// All reduced words of length <= radius (Free), or one representative per
// resolver class (Dedup, shortest-then-lex representative). Throws on a
// resolver that merges two previously distinct representatives.
BallEnumeration enumerate_ball(const GeneratorSet& gens, int radius,
                               const ElementResolver* resolver = nullptr);

// Growth-rate estimate from consecutive sphere ratios with a first-order
// 1/n correction, maximized over a trailing window and clamped to >= 0.
// Trailing all-zero counts are treated as a finite group (estimate 0).
double estimate_critical_exponent(const std::vector<std::uint64_t>& sphere_counts);

// Enumerated ball with weights exp(-s*length) and a certified upper bound
// on the weight of everything discarded by the truncation.
class WeightTable {
public:
    // Requires s > log(2k-1) (so the free-cover tail converges); the
    // resolver is consulted in Dedup mode only.
    static WeightTable build(const GeneratorSet& gens, double s, int radius,
                             const ElementResolver* resolver = nullptr);

    double s() const { return s_; }
    int radius() const { return radius_; }
    const GeneratorSet& generators() const { return gens_; }
    const std::vector<GroupWord>& words() const { return ball_.words; }
    const std::vector<std::uint64_t>& sphere_counts() const { return ball_.sphere_counts; }

    // exp(-s*n); valid for 0 <= n <= 2*radius+2 (covers shifted distances).
    double weight_of_length(int n) const { return exp_table_[static_cast<std::size_t>(n)]; }
    double weight(const GroupWord& w) const { return weight_of_length(w.length()); }

    // Upper bound on sum of exp(-s*|w|) over all discarded reduced words,
    // always computed from the free-cover sphere counts 2k(2k-1)^(n-1).
    double tail_bound() const { return tail_bound_; }

    // Sum of enumerated weights, accumulated sphere by sphere.
    double total_mass() const { return total_mass_; }

    // Partial mass of spheres lo..hi (inclusive), same accumulation scheme.
    double sphere_mass(int lo, int hi) const;

private:
    WeightTable() = default;

    GeneratorSet gens_;
    double s_ = 0.0;
    int radius_ = 0;
    BallEnumeration ball_;
    std::vector<double> exp_table_;
    double tail_bound_ = 0.0;
    double total_mass_ = 0.0;
};

// Closed-form free-cover tail: sum over n > radius of 2k(2k-1)^(n-1)e^(-sn).
double free_tail_bound(int k, double s, int radius);

// For each word in the canonical list, the contiguous index range of its
// one-letter extensions in the next sphere. The enumeration only extends
// kept words, so the list is prefix-closed and these ranges tile each
// sphere; they drive depth-first evaluation with shared prefixes.
std::vector<std::pair<std::uint32_t, std::uint32_t>> prefix_child_ranges(const WeightTable& wt);

// Sphere start offsets: offsets[n] is the index of the first word of
// length n in the canonical list; the final entry is the total count.
std::vector<std::size_t> sphere_offsets(const WeightTable& wt);

// Term-by-term comparison of the weight sum re-centered at a translated
// basepoint against the basepoint sum, on the common sub-ball of radius
// radius - |translation|. Both sides enumerate the same relative words, the
// translated side recomputing each distance by reduced concatenation, so
// any nonzero discrepancy indicates a defect in the word arithmetic.
struct TranslationInvarianceReport {
    GroupWord translation;
    int common_radius = 0;
    std::uint64_t terms = 0;
    double max_term_discrepancy = 0.0;
    double sum_discrepancy = 0.0;
    bool pass = false;
};

TranslationInvarianceReport check_translation_invariance(const WeightTable& wt,
                                                         const GroupWord& translation);

std::vector<TranslationInvarianceReport> check_translation_invariance(
    const WeightTable& wt, const std::vector<GroupWord>& translations);

}  // namespace bilip
