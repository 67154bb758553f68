#include "bilip/group.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <stdexcept>

namespace bilip {

namespace {

bool is_reduced(const std::vector<Letter>& letters) {
    for (std::size_t i = 1; i < letters.size(); ++i) {
        if (letters[i] == inverse_letter(letters[i - 1])) return false;
    }
    return true;
}

}  // namespace

GroupWord::GroupWord(std::vector<Letter> letters) : letters_(std::move(letters)) {
    if (!is_reduced(letters_)) {
        throw std::invalid_argument("GroupWord: letter sequence is not freely reduced");
    }
}

GroupWord GroupWord::reduce(const std::vector<Letter>& letters) {
    std::vector<Letter> out;
    out.reserve(letters.size());
    for (Letter l : letters) {
        if (!out.empty() && out.back() == inverse_letter(l)) {
            out.pop_back();
        } else {
            out.push_back(l);
        }
    }
    GroupWord w;
    w.letters_ = std::move(out);
    return w;
}

GroupWord GroupWord::inverse() const {
    GroupWord w;
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
        w.letters_.push_back(inverse_letter(*it));
    }
    return w;
}

GroupWord GroupWord::concat(const GroupWord& other) const {
    std::size_t i = letters_.size();
    std::size_t j = 0;
    while (i > 0 && j < other.letters_.size() &&
           letters_[i - 1] == inverse_letter(other.letters_[j])) {
        --i;
        ++j;
    }
    GroupWord w;
    w.letters_.reserve(i + other.letters_.size() - j);
    w.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(i));
    w.letters_.insert(w.letters_.end(), other.letters_.begin() + static_cast<std::ptrdiff_t>(j),
                      other.letters_.end());
    return w;
}

GroupWord GroupWord::append(Letter l) const {
    if (!letters_.empty() && letters_.back() == inverse_letter(l)) {
        throw std::invalid_argument("GroupWord::append would cancel; use concat");
    }
    GroupWord w;
    w.letters_ = letters_;
    w.letters_.push_back(l);
    return w;
}

bool GroupWord::operator<(const GroupWord& other) const {
    if (letters_.size() != other.letters_.size()) {
        return letters_.size() < other.letters_.size();
    }
    return letters_ < other.letters_;
}

std::string GroupWord::str(const std::vector<std::string>& labels) const {
    if (letters_.empty()) return "e";
    std::string out;
    for (Letter l : letters_) {
        const auto idx = static_cast<std::size_t>(l);
        if (idx < labels.size()) {
            out += labels[idx];
        } else {
            out += "?";
        }
    }
    return out;
}

GeneratorSet GeneratorSet::free_group(int k) {
    GeneratorSet g;
    g.k = k;
    g.mode = EnumerationMode::Free;
    for (int i = 0; i < k; ++i) {
        const char lower = static_cast<char>('a' + i);
        const char upper = static_cast<char>('A' + i);
        g.labels.push_back(std::string(1, lower));
        g.labels.push_back(std::string(1, upper));
    }
    return g;
}

GeneratorSet GeneratorSet::dedup_group(int k) {
    GeneratorSet g = free_group(k);
    g.mode = EnumerationMode::Dedup;
    return g;
}

void GeneratorSet::validate() const {
    if (k < 0) throw std::invalid_argument("GeneratorSet: k must be >= 0");
    if (labels.size() != static_cast<std::size_t>(2 * k)) {
        throw std::invalid_argument("GeneratorSet: expected 2k labels");
    }
}

double GeneratorSet::exponent_upper_bound() const {
    if (k <= 1) return 0.0;
    return std::log(2.0 * k - 1.0);
}

ElementResolver ElementResolver::abelianized(int k) {
    ElementResolver r;
    r.name = "abelianized";
    r.same = [k](const GroupWord& a, const GroupWord& b) {
        std::vector<long long> counts(static_cast<std::size_t>(k), 0);
        for (Letter l : a.letters()) {
            counts[static_cast<std::size_t>(l / 2)] += (l % 2 == 0) ? 1 : -1;
        }
        for (Letter l : b.letters()) {
            counts[static_cast<std::size_t>(l / 2)] -= (l % 2 == 0) ? 1 : -1;
        }
        return std::all_of(counts.begin(), counts.end(), [](long long c) { return c == 0; });
    };
    return r;
}

namespace {

// One node of the breadth-first, lexicographic traversal of reduced words.
struct QueueEntry {
    GroupWord word;
    bool kept = true;  // Dedup: whether this word is a class representative
};

}  // namespace

BallEnumeration enumerate_ball(const GeneratorSet& gens, int radius,
                               const ElementResolver* resolver) {
    gens.validate();
    if (radius < 0) throw std::invalid_argument("enumerate_ball: radius must be >= 0");
    const bool dedup = gens.mode == EnumerationMode::Dedup;
    if (dedup && (resolver == nullptr || !resolver->same)) {
        throw std::invalid_argument("enumerate_ball: Dedup mode requires a resolver");
    }

    BallEnumeration out;
    out.sphere_counts.assign(static_cast<std::size_t>(radius) + 1, 0);
    out.words.push_back(GroupWord::identity());
    out.sphere_counts[0] = 1;

    std::vector<QueueEntry> frontier;
    frontier.push_back(QueueEntry{GroupWord::identity(), true});

    for (int n = 1; n <= radius; ++n) {
        std::vector<QueueEntry> next;
        next.reserve(frontier.size() * static_cast<std::size_t>(gens.alphabet_size()));
        for (const QueueEntry& entry : frontier) {
            // Children of non-representatives are skipped: if the resolver
            // is a congruence, every such child is equivalent to a child of
            // the representative and is found from there instead.
            if (!entry.kept) continue;
            for (Letter l = 0; l < static_cast<Letter>(gens.alphabet_size()); ++l) {
                if (!entry.word.empty() &&
                    entry.word.letters().back() == inverse_letter(l)) {
                    continue;
                }
                QueueEntry child{entry.word.append(l), true};
                if (dedup) {
                    // out.words holds exactly the representatives found so
                    // far. A new word matching two distinct representatives
                    // means the resolver is not an equivalence compatible
                    // with the traversal, which is a hard input error.
                    std::size_t first_match = out.words.size();
                    for (std::size_t r = 0; r < out.words.size(); ++r) {
                        if (resolver->same(child.word, out.words[r])) {
                            if (first_match != out.words.size()) {
                                throw std::runtime_error(
                                    "enumerate_ball: resolver matched '" +
                                    child.word.str(gens.labels) +
                                    "' to distinct representatives '" +
                                    out.words[first_match].str(gens.labels) + "' and '" +
                                    out.words[r].str(gens.labels) + "'");
                            }
                            first_match = r;
                        }
                    }
                    child.kept = (first_match == out.words.size());
                }
                if (child.kept) {
                    out.words.push_back(child.word);
                    out.sphere_counts[static_cast<std::size_t>(n)] += 1;
                }
                next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
    }
    return out;
}

double estimate_critical_exponent(const std::vector<std::uint64_t>& sphere_counts) {
    // Strip trailing zero spheres: once the enumeration stops producing new
    // elements the group (image) is finite and the exponent is 0.
    std::size_t m = sphere_counts.size();
    while (m > 0 && sphere_counts[m - 1] == 0) --m;
    if (m <= 1) return 0.0;

    // Consecutive ratios r_n = log(a_n / a_{n-1}) converge to the exponent
    // like c/n for polynomial-correction growth, so the Richardson-style
    // extrapolant n*r_n - (n-1)*r_{n-1} removes the leading 1/n error.
    std::vector<double> ratios;  // ratios[i] = r_{i+1}
    for (std::size_t n = 1; n < m; ++n) {
        if (sphere_counts[n - 1] == 0 || sphere_counts[n] == 0) {
            ratios.push_back(0.0);
            continue;
        }
        ratios.push_back(std::log(static_cast<double>(sphere_counts[n]) /
                                  static_cast<double>(sphere_counts[n - 1])));
    }
    if (ratios.size() == 1) return std::max(0.0, ratios[0]);

    std::vector<double> extrapolated;
    for (std::size_t i = 1; i < ratios.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        extrapolated.push_back(n * ratios[i] - (n - 1.0) * ratios[i - 1]);
    }
    const std::size_t window = std::min<std::size_t>(3, extrapolated.size());
    double best = 0.0;
    for (std::size_t i = extrapolated.size() - window; i < extrapolated.size(); ++i) {
        best = std::max(best, extrapolated[i]);
    }
    return best;
}

double free_tail_bound(int k, double s, int radius) {
    if (k <= 0) return 0.0;
    const double t = (2.0 * k - 1.0) * std::exp(-s);
    if (!(t < 1.0)) {
        throw std::invalid_argument("free_tail_bound: requires s > log(2k-1)");
    }
    // Sphere n >= 1 of the free cover has 2k(2k-1)^(n-1) words of weight
    // e^(-sn); summing the geometric series from n = radius+1 upward gives
    // 2k e^(-s) t^radius / (1 - t).
    return 2.0 * k * std::exp(-s) * std::pow(t, radius) / (1.0 - t);
}

WeightTable WeightTable::build(const GeneratorSet& gens, double s, int radius,
                               const ElementResolver* resolver) {
    gens.validate();
    if (!(s > 0.0)) throw std::invalid_argument("WeightTable: s must be > 0");
    if (gens.k >= 1 && !(s > gens.exponent_upper_bound())) {
        throw std::invalid_argument("WeightTable: s must exceed log(2k-1) for convergence");
    }

    WeightTable wt;
    wt.gens_ = gens;
    wt.s_ = s;
    wt.radius_ = radius;
    wt.ball_ = enumerate_ball(gens, radius, resolver);
    wt.exp_table_.resize(static_cast<std::size_t>(2 * radius + 3));
    for (std::size_t n = 0; n < wt.exp_table_.size(); ++n) {
        wt.exp_table_[n] = std::exp(-s * static_cast<double>(n));
    }
    wt.tail_bound_ = free_tail_bound(gens.k, s, radius);
    wt.total_mass_ = wt.sphere_mass(0, radius);
    return wt;
}

double WeightTable::sphere_mass(int lo, int hi) const {
    double mass = 0.0;
    for (int n = lo; n <= hi && n <= radius_; ++n) {
        if (n < 0) continue;
        mass += weight_of_length(n) *
                static_cast<double>(ball_.sphere_counts[static_cast<std::size_t>(n)]);
    }
    return mass;
}

std::vector<std::size_t> sphere_offsets(const WeightTable& wt) {
    std::vector<std::size_t> offsets;
    offsets.reserve(wt.sphere_counts().size() + 1);
    std::size_t acc = 0;
    offsets.push_back(0);
    for (std::uint64_t c : wt.sphere_counts()) {
        acc += c;
        offsets.push_back(acc);
    }
    return offsets;
}

namespace {

bool has_prefix(const GroupWord& w, const GroupWord& prefix) {
    if (w.length() < prefix.length()) return false;
    return std::equal(prefix.letters().begin(), prefix.letters().end(), w.letters().begin());
}

}  // namespace

std::vector<std::pair<std::uint32_t, std::uint32_t>> prefix_child_ranges(const WeightTable& wt) {
    const auto& words = wt.words();
    const auto offsets = sphere_offsets(wt);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ranges(words.size(), {0, 0});
    for (std::size_t n = 0; n + 2 < offsets.size(); ++n) {
        std::size_t c = offsets[n + 1];
        const std::size_t c_end = offsets[n + 2];
        for (std::size_t p = offsets[n]; p < offsets[n + 1]; ++p) {
            const std::size_t begin = c;
            while (c < c_end && has_prefix(words[c], words[p])) ++c;
            ranges[p] = {static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(c)};
        }
        if (c != c_end) {
            throw std::logic_error("prefix_child_ranges: enumeration is not prefix-closed");
        }
    }
    return ranges;
}

TranslationInvarianceReport check_translation_invariance(const WeightTable& wt,
                                                         const GroupWord& translation) {
    TranslationInvarianceReport report;
    report.translation = translation;
    report.common_radius = wt.radius() - translation.length();
    if (report.common_radius < 0) {
        report.pass = false;
        return report;
    }

    // For every w in the common sub-ball, the term weight(|w|) appears in
    // the sum centered at the identity, and the sum centered at the
    // translation p contains the word pw at distance dist(pw, p) = |w|.
    // Recomputing that distance through reduced concatenation and comparing
    // table lookups must give bitwise-identical floats.
    double left_sum = 0.0;
    double right_sum = 0.0;
    for (const GroupWord& w : wt.words()) {
        if (w.length() > report.common_radius) continue;
        const GroupWord pw = translation.concat(w);
        const GroupWord rel = translation.inverse().concat(pw);
        const double base_term = wt.weight_of_length(w.length());
        const double translated_term = wt.weight_of_length(rel.length());
        left_sum += base_term;
        right_sum += translated_term;
        report.max_term_discrepancy =
            std::max(report.max_term_discrepancy, std::abs(base_term - translated_term));
        report.terms += 1;
    }
    report.sum_discrepancy = std::abs(left_sum - right_sum);
    report.pass = report.max_term_discrepancy == 0.0 && report.sum_discrepancy == 0.0;
    return report;
}

std::vector<TranslationInvarianceReport> check_translation_invariance(
    const WeightTable& wt, const std::vector<GroupWord>& translations) {
    std::vector<TranslationInvarianceReport> out;
    out.reserve(translations.size());
    for (const GroupWord& t : translations) {
        out.push_back(check_translation_invariance(wt, t));
    }
    return out;
}

}  // namespace bilip
