// Conjugating a piecewise-linear circle action to a Lipschitz action.
//
// The pipeline: average the pushforwards of Lebesgue measure over the
// weighted word ball into a measure nu, normalize to a probability measure
// mu, invert its CDF to get the conjugating homeomorphism, conjugate each
// generator, and certify the slopes of the results.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bilip/circle.hpp"
#include "bilip/group.hpp"

namespace bilip {

// CDF of a Borel probability measure on the circle with full support and
// no atoms: strictly increasing PL with G(0) = 0 and G(1) = 1 exactly.
class MeasureCDF {
public:
    MeasureCDF(std::vector<double> breakpoints, std::vector<double> values);

    static MeasureCDF lebesgue();

    const std::vector<double>& breakpoints() const { return x_; }
    const std::vector<double>& values() const { return g_; }
    std::size_t breakpoint_count() const { return x_.size(); }

    double eval(double t) const;  // G(t), t in [0,1]
    double min_slope() const;
    double max_slope() const;

    // The CDF viewed as a degree-one lift (it is one: G(0)=0 in [0,1),
    // G(1) = G(0)+1); inverting this homeomorphism yields Psi.
    CircleHomeoPL as_homeo() const;

private:
    std::vector<double> x_;
    std::vector<double> g_;
};

// CDF of the pushforward of Lebesgue measure: G(t) = lambda(psi^-1[0,t]),
// anchored at basepoint 0.
MeasureCDF pushforward_cdf(const CircleHomeoPL& psi);

enum class GridPolicy {
    MergedExact,  // exact union of all pushforward breakpoints; errors past the cap
    Uniform,      // fixed uniform grid (PL coarsening of each pushforward)
    Auto,         // MergedExact when the estimated union fits the cap, else Uniform
};

struct BuildMuOptions {
    GridPolicy policy = GridPolicy::Auto;
    int uniform_cells = 1 << 16;
    std::size_t merged_cap = CircleHomeoPL::kMaxBreakpoints;
};

struct MuResult {
    MeasureCDF mu;
    double nu_mass = 0.0;      // nu(S^1) as summed on the grid
    double mass_error = 0.0;   // |nu_mass - wt.total_mass()|, exactly 0 by construction
    std::size_t grid_points = 0;
    bool merged_exact = false;
};

// nu = sum over ball words of e^{-s|w|} (pushforward of Lebesgue by w),
// summed per sphere in canonical order on a common grid; mu = nu/nu(S^1).
// `generators` lists one homeomorphism per generator pair; inverse letters
// act by the PL inverse.
MuResult build_mu(const std::vector<CircleHomeoPL>& generators, const WeightTable& wt,
                  const BuildMuOptions& options = {});

struct PsiMuResult {
    CircleHomeoPL psi;
    double pushforward_residual = 0.0;  // sup |pushforward_cdf(psi) - mu|
    double roundtrip_residual = 0.0;    // sup |mu(psi(t)) - t|
};

// The inverse-CDF homeomorphism, with its self-certification residuals.
PsiMuResult psi_mu(const MeasureCDF& mu);

// psi^-1 . g . psi for each generator g.
std::vector<CircleHomeoPL> conjugate_action(const std::vector<CircleHomeoPL>& generators,
                                            const CircleHomeoPL& psi);

// mu(g A) vs e^{+-s} mu(A) on probe arcs A = [0,t): both directions must
// hold up to e^{s} * discarded-mass/nu_mass, where the discarded mass is
// the free tail one radius in (the shifted ball sticks out by one letter).
struct MeasureEquivarianceReport {
    double bound = 0.0;
    double max_upper_violation = 0.0;  // mu(gA) - e^{s} mu(A), must stay <= bound
    double max_lower_violation = 0.0;  // e^{-s} mu(A) - mu(gA) - tail-term, must stay <= 0
    bool pass = false;
};

MeasureEquivarianceReport verify_measure_equivariance(const MeasureCDF& mu,
                                                      const CircleHomeoPL& g, double s,
                                                      double tail_over_mass, int probes = 256);

}  // namespace bilip
