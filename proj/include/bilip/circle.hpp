// Piecewise-linear orientation-preserving circle homeomorphisms.
//
// A map is stored through its lift F: R -> R, a strictly increasing
// piecewise-linear function with F(t+1) = F(t)+1, sampled over one period:
// breakpoints 0 = x_0 < x_1 < ... < x_m = 1 with values y_i = F(x_i),
// y_m = y_0 + 1 exactly, and y_0 normalized into [0,1). The circle map is
// t -> frac(F(t)). Composition and inversion stay exactly piecewise linear,
// so certificates derived from slopes are exact up to float rounding.

#pragma once

#include <cstddef>
#include <vector>

namespace bilip {

class CircleHomeoPL {
public:
    // Breakpoint/value arrays as described above. Throws on any violated
    // invariant (ordering, monotonicity, normalization, period closure).
    CircleHomeoPL(std::vector<double> breakpoints, std::vector<double> lift_values);

    static CircleHomeoPL identity();
    // t -> frac(t + theta); any real theta, reduced mod 1.
    static CircleHomeoPL rotation(double theta);
    // PL interpolation of t -> t^alpha on `segments` equal intervals;
    // requires alpha > 0. Fixes 0; slope near 0 is segments^(1-alpha).
    static CircleHomeoPL power_map(double alpha, int segments);

    std::size_t breakpoint_count() const { return x_.size(); }
    const std::vector<double>& breakpoints() const { return x_; }
    const std::vector<double>& lift_values() const { return y_; }

    // Lift value F(t) for any real t, via periodicity.
    double lift(double t) const;

    // Circle value in [0,1) for t in [0,1).
    double apply(double t) const;

    double min_slope() const;
    double max_slope() const;

    CircleHomeoPL inverse() const;

    // Largest number of breakpoints a composition may produce before it is
    // rejected as a resource error.
    static constexpr std::size_t kMaxBreakpoints = 1000000;

    // Sliver thresholds for derived breakpoints. A segment narrower than
    // kMinRelGap relative to its position cannot carry a trustworthy slope
    // (coordinate quantization dominates), so such breakpoints are merged;
    // the kept chord deviates from the dropped points by at most the local
    // slope times the relative gap. kMinGap is the absolute guard band at
    // the period end, where the scale is 1.
    static constexpr double kMinRelGap = 1e-12;
    static constexpr double kMinGap = 1e-15;

    // g after h: t -> g(h(t)). Breakpoints are h's together with the
    // preimages under h of g's; throws if the result exceeds kMaxBreakpoints.
    friend CircleHomeoPL compose(const CircleHomeoPL& g, const CircleHomeoPL& h);

    // Builds a homeomorphism from samples (t_i, F(t_i)) of a lift over one
    // period [a, a+1]; rebases the domain to [0,1] and normalizes F(0).
    static CircleHomeoPL from_lift_samples(const std::vector<double>& ts,
                                           const std::vector<double>& vs);

private:
    CircleHomeoPL() = default;
    void validate() const;

    std::vector<double> x_;
    std::vector<double> y_;
};

CircleHomeoPL compose(const CircleHomeoPL& g, const CircleHomeoPL& h);

inline CircleHomeoPL invert(const CircleHomeoPL& h) { return h.inverse(); }
inline double apply(const CircleHomeoPL& h, double t) { return h.apply(t); }

// max(max_slope, 1/min_slope): the smallest L with both h and h^{-1}
// L-Lipschitz for the standard metric on the circle.
double lipschitz_certificate(const CircleHomeoPL& h);

}  // namespace bilip
