#include "bilip/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bilip {

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double t) {
    const auto it = std::upper_bound(xs.begin(), xs.end(), t);
    std::size_t i = (it == xs.begin()) ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
    if (i >= xs.size() - 1) i = xs.size() - 2;
    return ys[i] + (t - xs[i]) * (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
}

}  // namespace

MeasureCDF::MeasureCDF(std::vector<double> breakpoints, std::vector<double> values)
    : x_(std::move(breakpoints)), g_(std::move(values)) {
    if (x_.size() != g_.size() || x_.size() < 2) {
        throw std::invalid_argument("MeasureCDF: need matching arrays of size >= 2");
    }
    if (x_.front() != 0.0 || x_.back() != 1.0) {
        throw std::invalid_argument("MeasureCDF: breakpoints must span [0,1]");
    }
    if (g_.front() != 0.0 || g_.back() != 1.0) {
        throw std::invalid_argument("MeasureCDF: CDF must run from 0 to 1 exactly");
    }
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        if (!(x_[i + 1] > x_[i])) {
            throw std::invalid_argument("MeasureCDF: breakpoints must strictly increase");
        }
        if (!(g_[i + 1] > g_[i])) {
            throw std::invalid_argument(
                "MeasureCDF: CDF must strictly increase (full support, no atoms)");
        }
    }
}

MeasureCDF MeasureCDF::lebesgue() { return MeasureCDF({0.0, 1.0}, {0.0, 1.0}); }

double MeasureCDF::eval(double t) const { return interp(x_, g_, t); }

double MeasureCDF::min_slope() const {
    double m = (g_[1] - g_[0]) / (x_[1] - x_[0]);
    for (std::size_t i = 1; i + 1 < x_.size(); ++i) {
        m = std::min(m, (g_[i + 1] - g_[i]) / (x_[i + 1] - x_[i]));
    }
    return m;
}

double MeasureCDF::max_slope() const {
    double m = (g_[1] - g_[0]) / (x_[1] - x_[0]);
    for (std::size_t i = 1; i + 1 < x_.size(); ++i) {
        m = std::max(m, (g_[i + 1] - g_[i]) / (x_[i + 1] - x_[i]));
    }
    return m;
}

CircleHomeoPL MeasureCDF::as_homeo() const { return CircleHomeoPL(x_, g_); }

namespace {

// The pushforward CDF of psi in breakpoint form: the inverse lift with its
// value at 0 subtracted breakpoint-wise, endpoints pinned to 0 and 1. Kept
// as raw arrays so deep compositions with near-flat stretches (where the
// subtraction can tie adjacent values) can still be summed; the strictness
// check happens on the final sum.
void pushforward_arrays(const CircleHomeoPL& psi_inverse, std::vector<double>& xs,
                        std::vector<double>& gs) {
    xs = psi_inverse.breakpoints();
    const std::vector<double>& ys = psi_inverse.lift_values();
    gs.resize(ys.size());
    const double y0 = ys.front();
    for (std::size_t i = 0; i < ys.size(); ++i) gs[i] = ys[i] - y0;
    gs.front() = 0.0;
    gs.back() = 1.0;
}

}  // namespace

MeasureCDF pushforward_cdf(const CircleHomeoPL& psi) {
    std::vector<double> xs;
    std::vector<double> gs;
    pushforward_arrays(psi.inverse(), xs, gs);
    return MeasureCDF(std::move(xs), std::move(gs));
}

namespace {

// Adds the pushforward CDF of one word, in breakpoint form, onto the grid
// accumulator by a single merge scan.
void accumulate_on_grid(const std::vector<double>& xs, const std::vector<double>& gs,
                        const std::vector<double>& grid, std::vector<double>& acc) {
    const std::size_t m = grid.size() - 1;
    acc[0] += 0.0;
    std::size_t seg = 0;
    for (std::size_t i = 1; i < m; ++i) {
        const double t = grid[i];
        while (seg + 2 < xs.size() && xs[seg + 1] <= t) ++seg;
        acc[i] += gs[seg] + (t - xs[seg]) * (gs[seg + 1] - gs[seg]) / (xs[seg + 1] - xs[seg]);
    }
    acc[m] += 1.0;
}

struct MuDfs {
    const std::vector<GroupWord>& words;
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& children;
    const std::vector<CircleHomeoPL>& letter_maps;
    const std::vector<double>& grid;
    std::vector<std::vector<double>>& acc;  // per sphere

    void visit(std::uint32_t idx, int depth, const CircleHomeoPL& inverse_composite) {
        std::vector<double> xs;
        std::vector<double> gs;
        pushforward_arrays(inverse_composite, xs, gs);
        accumulate_on_grid(xs, gs, grid, acc[static_cast<std::size_t>(depth)]);
        const auto [c_begin, c_end] = children[idx];
        for (std::uint32_t c = c_begin; c < c_end; ++c) {
            const Letter l = words[c].letters().back();
            const CircleHomeoPL next =
                compose(letter_maps[static_cast<std::size_t>(inverse_letter(l))],
                        inverse_composite);
            visit(c, depth + 1, next);
        }
    }
};

// Collects the union of pushforward breakpoints of every ball word.
struct GridCollect {
    const std::vector<GroupWord>& words;
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& children;
    const std::vector<CircleHomeoPL>& letter_maps;
    std::vector<double>& out;
    std::size_t cap;

    void visit(std::uint32_t idx, const CircleHomeoPL& inverse_composite) {
        const auto& xs = inverse_composite.breakpoints();
        out.insert(out.end(), xs.begin(), xs.end());
        if (out.size() > 4 * cap + 16) {
            throw std::length_error(
                "build_mu: merged breakpoint grid exceeds the cap; use a coarser grid policy");
        }
        const auto [c_begin, c_end] = children[idx];
        for (std::uint32_t c = c_begin; c < c_end; ++c) {
            const Letter l = words[c].letters().back();
            const CircleHomeoPL next =
                compose(letter_maps[static_cast<std::size_t>(inverse_letter(l))],
                        inverse_composite);
            visit(c, next);
        }
    }
};

}  // namespace

MuResult build_mu(const std::vector<CircleHomeoPL>& generators, const WeightTable& wt,
                  const BuildMuOptions& options) {
    if (static_cast<int>(generators.size()) != wt.generators().k) {
        throw std::invalid_argument("build_mu: need one homeomorphism per generator pair");
    }
    std::vector<CircleHomeoPL> letter_maps;
    letter_maps.reserve(generators.size() * 2);
    for (const auto& g : generators) {
        letter_maps.push_back(g);
        letter_maps.push_back(g.inverse());
    }

    const auto children = prefix_child_ranges(wt);

    // Estimated merged-grid size: a composed inverse has at most the total
    // breakpoint count of its letters, so sum that over the ball.
    std::size_t estimate = 0;
    {
        std::vector<std::size_t> per_word(wt.words().size(), 2);
        for (std::size_t i = 0; i < wt.words().size(); ++i) {
            const GroupWord& w = wt.words()[i];
            std::size_t total = 2;
            for (Letter l : w.letters()) {
                total += letter_maps[static_cast<std::size_t>(inverse_letter(l))]
                             .breakpoint_count();
            }
            per_word[i] = total;
            estimate += total;
        }
    }

    bool merged = false;
    switch (options.policy) {
        case GridPolicy::MergedExact:
            merged = true;
            break;
        case GridPolicy::Uniform:
            merged = false;
            break;
        case GridPolicy::Auto:
            merged = estimate <= options.merged_cap;
            break;
    }

    std::vector<double> grid;
    if (merged) {
        if (options.policy == GridPolicy::MergedExact && estimate > options.merged_cap) {
            throw std::length_error(
                "build_mu: merged breakpoint grid exceeds the cap; use a coarser grid policy");
        }
        GridCollect collect{wt.words(), children, letter_maps, grid, options.merged_cap};
        grid.reserve(estimate + 2);
        collect.visit(0, CircleHomeoPL::identity());
        grid.push_back(0.0);
        grid.push_back(1.0);
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        if (grid.size() > options.merged_cap) {
            throw std::length_error(
                "build_mu: merged breakpoint grid exceeds the cap; use a coarser grid policy");
        }
    } else {
        const int m = options.uniform_cells;
        if (m < 2) throw std::invalid_argument("build_mu: uniform grid needs >= 2 cells");
        grid.resize(static_cast<std::size_t>(m) + 1);
        for (int i = 0; i <= m; ++i) {
            grid[static_cast<std::size_t>(i)] =
                static_cast<double>(i) / static_cast<double>(m);
        }
        grid.back() = 1.0;
    }

    std::vector<std::vector<double>> acc(
        static_cast<std::size_t>(wt.radius()) + 1,
        std::vector<double>(grid.size(), 0.0));
    MuDfs dfs{wt.words(), children, letter_maps, grid, acc};
    dfs.visit(0, 0, CircleHomeoPL::identity());

    std::vector<double> nu(grid.size(), 0.0);
    for (int n = 0; n <= wt.radius(); ++n) {
        const double w = wt.weight_of_length(n);
        const auto& a = acc[static_cast<std::size_t>(n)];
        for (std::size_t i = 0; i < nu.size(); ++i) nu[i] += w * a[i];
    }
    const double mass = nu.back();
    std::vector<double> mu(nu.size());
    for (std::size_t i = 0; i < nu.size(); ++i) mu[i] = nu[i] / mass;
    mu.front() = 0.0;
    mu.back() = 1.0;

    // A merged grid can contain knots only a few ulps apart (deep word
    // images cluster); where the summed CDF fails to advance in double
    // precision, drop the knot. Kept knots retain their exact sums.
    {
        const double rel = CircleHomeoPL::kMinRelGap;
        std::size_t kept = 0;
        for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
            if (grid[i] > grid[kept] && mu[i] > mu[kept] &&
                grid[i] - grid[kept] >= rel * grid[i] &&
                mu[i] - mu[kept] >= rel * mu[i]) {
                ++kept;
                grid[kept] = grid[i];
                mu[kept] = mu[i];
            }
        }
        // The homeomorphism built from these knots drops points inside the
        // guard band at the period end (on either axis); drop them here too
        // so the CDF and its invertible form share the same knot set.
        while (kept > 0 && (grid[kept] >= 1.0 - CircleHomeoPL::kMinGap ||
                            mu[kept] >= 1.0 - CircleHomeoPL::kMinGap)) {
            --kept;
        }
        ++kept;
        grid[kept] = grid.back();
        mu[kept] = mu.back();
        grid.resize(kept + 1);
        mu.resize(kept + 1);
    }

    MuResult result{MeasureCDF(std::move(grid), std::move(mu)), mass,
                    std::abs(mass - wt.total_mass()), 0, merged};
    result.grid_points = result.mu.breakpoint_count();
    return result;
}

PsiMuResult psi_mu(const MeasureCDF& mu) {
    PsiMuResult out{mu.as_homeo().inverse(), 0.0, 0.0};

    // Pushforward certification: the CDF of psi-pushed Lebesgue measure
    // must reproduce mu. Both are PL, so the sup over the union of their
    // breakpoints is the true sup.
    const MeasureCDF pf = pushforward_cdf(out.psi);
    for (double t : pf.breakpoints()) {
        out.pushforward_residual =
            std::max(out.pushforward_residual, std::abs(pf.eval(t) - mu.eval(t)));
    }
    for (double t : mu.breakpoints()) {
        out.pushforward_residual =
            std::max(out.pushforward_residual, std::abs(pf.eval(t) - mu.eval(t)));
    }

    // Round trip mu(psi(t)) = t; corners of the composite are exactly the
    // breakpoints of psi, probed together with a uniform grid.
    const int probes = 4096;
    for (int i = 0; i < probes; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(probes);
        out.roundtrip_residual =
            std::max(out.roundtrip_residual, std::abs(mu.eval(out.psi.apply(t)) - t));
    }
    for (double t : out.psi.breakpoints()) {
        if (t >= 1.0) continue;
        out.roundtrip_residual =
            std::max(out.roundtrip_residual, std::abs(mu.eval(out.psi.apply(t)) - t));
    }
    return out;
}

std::vector<CircleHomeoPL> conjugate_action(const std::vector<CircleHomeoPL>& generators,
                                            const CircleHomeoPL& psi) {
    const CircleHomeoPL psi_inv = psi.inverse();
    std::vector<CircleHomeoPL> out;
    out.reserve(generators.size());
    for (const auto& g : generators) {
        out.push_back(compose(psi_inv, compose(g, psi)));
    }
    return out;
}

MeasureEquivarianceReport verify_measure_equivariance(const MeasureCDF& mu,
                                                      const CircleHomeoPL& g, double s,
                                                      double tail_over_mass, int probes) {
    MeasureEquivarianceReport rep;
    rep.bound = std::exp(s) * tail_over_mass;

    const double g0 = g.apply(0.0);
    const auto arc_mass = [&](double a, double b) {
        // mu-mass of the positively oriented arc from a to b
        const double ga = mu.eval(a);
        const double gb = mu.eval(b);
        return (b >= a) ? gb - ga : (1.0 - ga) + gb;
    };

    for (int i = 1; i < probes; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(probes);
        const double m_a = mu.eval(t);           // mu([0,t))
        const double m_ga = arc_mass(g0, g.apply(t));  // mu(g[0,t))
        const double upper = m_ga - std::exp(s) * m_a;
        const double lower = std::exp(-s) * m_a - m_ga - tail_over_mass;
        rep.max_upper_violation = std::max(rep.max_upper_violation, upper);
        rep.max_lower_violation = std::max(rep.max_lower_violation, lower);
    }
    rep.pass = rep.max_upper_violation <= rep.bound && rep.max_lower_violation <= 0.0;
    return rep;
}

}  // namespace bilip
