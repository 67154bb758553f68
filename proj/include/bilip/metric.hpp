// The regularized metric: the weighted sum of pulled-back base metrics
//
//     delta_p(x, y) = sum over words w of  e^{-s*dist(p, pw)} * base(w^-1 p^-1 x, w^-1 p^-1 y)
//
// truncated to the enumerated ball. The truncation is re-centered at the
// basepoint p: the sum runs over pw for w in the ball, so dist(p, pw) = |w|
// and the evaluation reduces to the basepoint-free sum at the transformed
// pair (p^-1 x, p^-1 y). This keeps every verifier a term-by-term
// comparison of identical weight tables, while the discarded mass stays
// bounded by e^{s|p|} * tail * diameter, the bound reported per evaluation.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bilip/group.hpp"
#include "bilip/space.hpp"

namespace bilip {

class RegularizedMetric {
public:
    // Builds the N x N table of delta_p over the sample. Throws if
    // |p| > R/2 (the re-centered ball would not certify the tail bound).
    static RegularizedMetric build(const SpaceSample& space, const GeneratorAction& action,
                                   const WeightTable& wt, const GroupWord& basepoint = {},
                                   int threads = 1);

    const SpaceSample& space() const { return *space_; }
    const GeneratorAction& action() const { return *action_; }
    const WeightTable& weights() const { return *wt_; }
    const GroupWord& basepoint() const { return basepoint_; }
    int threads() const { return threads_; }

    // Table value and the uniform truncation error bound
    // e^{s|p|} * tail * diameter.
    std::pair<double, double> regularized_distance(int i, int j) const {
        return {cache_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                truncation_error_};
    }
    double value(int i, int j) const {
        return cache_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    const std::vector<std::vector<double>>& cache() const { return cache_; }
    double truncation_error() const { return truncation_error_; }

    // delta_p with this table's weights evaluated at arbitrary transformed
    // sample points (used by verifiers that move the sample off the grid).
    std::vector<std::vector<double>> table_at(const std::vector<Point>& points) const;

    // The sample transformed by w (per-point word application).
    std::vector<Point> transformed_sample(const GroupWord& w) const;

private:
    RegularizedMetric() = default;

    const SpaceSample* space_ = nullptr;
    const GeneratorAction* action_ = nullptr;
    const WeightTable* wt_ = nullptr;
    GroupWord basepoint_;
    int threads_ = 1;
    std::vector<std::vector<double>> cache_;
    double truncation_error_ = 0.0;
};

// --- verification reports -------------------------------------------------

struct PairWitness {
    int i = -1;
    int j = -1;
};

// delta_e >= base metric, entrywise, zero tolerance. The identity word
// contributes the base metric with weight exactly 1 and every further term
// is non-negative, so even the floating-point sums satisfy this exactly.
struct LowerBoundReport {
    bool pass = false;
    double min_slack = 0.0;   // min over pairs with i != j
    PairWitness worst;
    std::uint64_t violations = 0;
};

LowerBoundReport verify_lower_bound_identity(const RegularizedMetric& rm);

// | delta_{eta p}(x,y) - delta_p(eta^-1 x, eta^-1 y) | <= bound on sampled
// pairs, with bound = 2 e^{s(|p|+|eta|)} * tail * diameter.
struct EquivarianceReport {
    GroupWord eta;
    double bound = 0.0;
    double max_residual = 0.0;
    PairWitness worst;
    bool pass = false;
};

EquivarianceReport verify_equivariance(const RegularizedMetric& rm, const GroupWord& eta,
                                       const std::vector<std::pair<int, int>>& pairs);
// All-pairs variant.
EquivarianceReport verify_equivariance(const RegularizedMetric& rm, const GroupWord& eta);

// e^{-s|p|} delta_e - eps_t <= delta_p <= e^{s|p|} delta_e + eps_t on all
// sampled pairs, eps_t = 2 e^{s|p|} * tail * diameter. Also reports the
// extreme ratios delta_p/delta_e over non-degenerate pairs.
struct SandwichReport {
    GroupWord p;
    double eps_t = 0.0;
    double lower_factor = 0.0;       // e^{-s|p|}
    double upper_factor = 0.0;       // e^{+s|p|}
    double max_lower_violation = 0.0;
    double max_upper_violation = 0.0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::uint64_t degenerate_pairs = 0;
    PairWitness worst;
    bool pass = false;
};

SandwichReport verify_bilipschitz_sandwich(const RegularizedMetric& rm, const GroupWord& p);

// Bi-Lipschitz constant of the action of psi on (sample, delta_e):
// max of delta_e(psi x, psi y)/delta_e(x, y) and its reciprocal, with the
// truncation-aware bound e^{s|psi|} (1 + eps_rel).
struct GeneratorBilipschitzReport {
    GroupWord psi;
    double constant = 1.0;         // empirical bi-Lipschitz constant
    double bound = 1.0;            // e^{s|psi|} * (1 + eps_rel)
    double eps_rel = 0.0;
    std::uint64_t degenerate_pairs = 0;
    PairWitness worst;
    bool pass = false;
};

GeneratorBilipschitzReport verify_generator_bilipschitz(const RegularizedMetric& rm,
                                                        const GroupWord& psi);

// Finite neighborhood basis witness: a word-ball radius r and arc size b
// such that closeness of the transformed pairs under every word in the
// r-ball forces delta_e(x, y) < epsilon; verified pointwise on the sample.
struct NeighborhoodWitnessReport {
    int x = 0;
    double epsilon = 0.0;
    int r = -1;                   // chosen ball radius (A = ball of radius r)
    std::uint64_t words_in_a = 0;
    double b = 0.0;
    std::uint64_t candidates = 0;  // sample points passing the b-filter
    bool verified = false;
};

NeighborhoodWitnessReport neighborhood_witness(const RegularizedMetric& rm, int x,
                                               double epsilon);

// Lipschitz control of the identity (sample, base) -> (sample, delta_e):
// if every generator is L-Lipschitz for the base metric and e^{-s} L <=
// e^{-u} with u above the growth estimate, then delta_e <= C_u * base with
// C_u = sum over the ball of e^{-u|w|} plus the u-tail.
struct LipschitzAdjustmentReport {
    double l = 1.0;
    double u = 0.0;
    double s = 0.0;
    double c_u = 0.0;             // certified constant
    double max_ratio = 0.0;       // max delta_e / base over non-degenerate pairs
    std::uint64_t degenerate_pairs = 0;
    PairWitness worst;
    bool parameters_ok = false;
    std::string parameter_failure;
    bool pass = false;
};

LipschitzAdjustmentReport verify_lipschitz_adjustment(const RegularizedMetric& rm, double l,
                                                      double u);

// Pairs with delta_e below this are excluded from ratio statistics (sample
// collisions must not poison Lipschitz estimates) and counted instead.
inline constexpr double kDegeneratePairCutoff = 1e-13;

}  // namespace bilip
