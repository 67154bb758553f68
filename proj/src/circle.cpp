#include "bilip/circle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace bilip {

namespace {

constexpr double kMinGap = CircleHomeoPL::kMinGap;
constexpr double kMinRelGap = CircleHomeoPL::kMinRelGap;

constexpr double kMinSlope = 1e-300;

// Interpolates the stored one-period table at u in [0,1].
double interp_period(const std::vector<double>& xs, const std::vector<double>& ys, double u) {
    const auto it = std::upper_bound(xs.begin(), xs.end(), u);
    std::size_t i = (it == xs.begin()) ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
    if (i >= xs.size() - 1) i = xs.size() - 2;
    const double slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + (u - xs[i]) * slope;
}

// Inverse interpolation: t with lift(t) = c, for c in [ys.front(), ys.back()].
double interp_period_inverse(const std::vector<double>& xs, const std::vector<double>& ys,
                             double c) {
    const auto it = std::upper_bound(ys.begin(), ys.end(), c);
    std::size_t i = (it == ys.begin()) ? 0 : static_cast<std::size_t>(it - ys.begin()) - 1;
    if (i >= ys.size() - 1) i = ys.size() - 2;
    return xs[i] + (c - ys[i]) * (xs[i + 1] - xs[i]) / (ys[i + 1] - ys[i]);
}

}  // namespace

CircleHomeoPL::CircleHomeoPL(std::vector<double> breakpoints, std::vector<double> lift_values)
    : x_(std::move(breakpoints)), y_(std::move(lift_values)) {
    validate();
}

void CircleHomeoPL::validate() const {
    if (x_.size() < 2 || x_.size() != y_.size()) {
        throw std::invalid_argument("CircleHomeoPL: need matching arrays of size >= 2");
    }
    if (x_.front() != 0.0 || x_.back() != 1.0) {
        throw std::invalid_argument("CircleHomeoPL: breakpoints must span [0,1]");
    }
    if (!(y_.front() >= 0.0) || !(y_.front() < 1.0)) {
        throw std::invalid_argument("CircleHomeoPL: lift value at 0 must lie in [0,1)");
    }
    if (y_.back() != y_.front() + 1.0) {
        throw std::invalid_argument("CircleHomeoPL: lift must close up: F(1) = F(0) + 1");
    }
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        const double dx = x_[i + 1] - x_[i];
        const double dy = y_[i + 1] - y_[i];
        if (!(dx > 0.0)) {
            throw std::invalid_argument("CircleHomeoPL: breakpoints must strictly increase");
        }
        if (!(dy / dx > kMinSlope)) {
            throw std::invalid_argument("CircleHomeoPL: slope must be strictly positive");
        }
    }
    if (x_.size() > kMaxBreakpoints + 1) {
        throw std::length_error("CircleHomeoPL: breakpoint budget exceeded");
    }
}

CircleHomeoPL CircleHomeoPL::identity() {
    CircleHomeoPL h;
    h.x_ = {0.0, 1.0};
    h.y_ = {0.0, 1.0};
    return h;
}

CircleHomeoPL CircleHomeoPL::rotation(double theta) {
    double r = theta - std::floor(theta);
    if (r >= 1.0) r = 0.0;
    if (r < 0.0) r = 0.0;
    CircleHomeoPL h;
    h.x_ = {0.0, 1.0};
    h.y_ = {r, r + 1.0};
    return h;
}

CircleHomeoPL CircleHomeoPL::power_map(double alpha, int segments) {
    if (!(alpha > 0.0)) throw std::invalid_argument("power_map: alpha must be > 0");
    if (segments < 1) throw std::invalid_argument("power_map: need at least one segment");
    CircleHomeoPL h;
    h.x_.resize(static_cast<std::size_t>(segments) + 1);
    h.y_.resize(h.x_.size());
    for (int i = 0; i <= segments; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(segments);
        h.x_[static_cast<std::size_t>(i)] = t;
        h.y_[static_cast<std::size_t>(i)] = std::pow(t, alpha);
    }
    h.x_.back() = 1.0;
    h.y_.back() = h.y_.front() + 1.0;
    h.validate();
    return h;
}

double CircleHomeoPL::lift(double t) const {
    const double k = std::floor(t);
    double u = t - k;
    if (u >= 1.0) u = 0.0;  // t just below an integer can round up
    return interp_period(x_, y_, u) + k;
}

double CircleHomeoPL::apply(double t) const {
    const double v = lift(t);
    double r = v - std::floor(v);
    if (r >= 1.0) r -= 1.0;
    if (r < 0.0) r = 0.0;
    return r;
}

double CircleHomeoPL::min_slope() const {
    double m = (y_[1] - y_[0]) / (x_[1] - x_[0]);
    for (std::size_t i = 1; i + 1 < x_.size(); ++i) {
        m = std::min(m, (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]));
    }
    return m;
}

double CircleHomeoPL::max_slope() const {
    double m = (y_[1] - y_[0]) / (x_[1] - x_[0]);
    for (std::size_t i = 1; i + 1 < x_.size(); ++i) {
        m = std::max(m, (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]));
    }
    return m;
}

CircleHomeoPL CircleHomeoPL::from_lift_samples(const std::vector<double>& ts,
                                               const std::vector<double>& vs) {
    if (ts.size() != vs.size() || ts.size() < 2) {
        throw std::invalid_argument("from_lift_samples: need matching arrays of size >= 2");
    }
    // Map every sample (except the duplicate period-closing one) into [0,1)
    // by an integer shift applied to both coordinates.
    std::vector<std::pair<double, double>> pts;
    pts.reserve(ts.size());
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const double n = std::floor(ts[i]);
        double rep = ts[i] - n;
        double val = vs[i] - n;
        if (rep >= 1.0) {
            rep -= 1.0;
            val -= 1.0;
        }
        pts.emplace_back(rep, val);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              pts.end());

    // Value at t = 0, interpolated across the wrap-around segment if 0 is
    // not itself a sample position.
    double v0;
    if (pts.front().first == 0.0) {
        v0 = pts.front().second;
    } else {
        const double xl = pts.back().first;
        const double vl = pts.back().second;
        const double xr = pts.front().first + 1.0;
        const double vr = pts.front().second + 1.0;
        const double v_at_1 = vl + (1.0 - xl) * (vr - vl) / (xr - xl);
        v0 = v_at_1 - 1.0;
        pts.insert(pts.begin(), {0.0, v0});
    }

    CircleHomeoPL h;
    h.x_.reserve(pts.size() + 1);
    h.y_.reserve(pts.size() + 1);
    for (const auto& p : pts) {
        if (!h.x_.empty() && p.first - h.x_.back() < kMinRelGap * p.first) continue;
        if (!h.x_.empty() && !(p.second > h.y_.back())) continue;
        if (p.first >= 1.0 - kMinGap) break;
        h.x_.push_back(p.first);
        h.y_.push_back(p.second);
    }
    const double shift = std::floor(h.y_.front());
    if (shift != 0.0) {
        for (double& v : h.y_) v -= shift;
    }
    while (h.y_.front() >= 1.0) {
        for (double& v : h.y_) v -= 1.0;
    }
    while (h.y_.front() < 0.0) {
        for (double& v : h.y_) v += 1.0;
    }
    h.x_.push_back(1.0);
    h.y_.push_back(h.y_.front() + 1.0);
    h.validate();
    return h;
}

CircleHomeoPL CircleHomeoPL::inverse() const {
    // The inverse lift is the reflected graph: samples (y_i, x_i) over the
    // period [y_0, y_0 + 1].
    return from_lift_samples(y_, x_);
}

CircleHomeoPL compose(const CircleHomeoPL& g, const CircleHomeoPL& h) {
    const std::vector<double>& hx = h.breakpoints();
    const std::vector<double>& hy = h.lift_values();
    const std::vector<double>& gx = g.breakpoints();

    std::vector<double> cand;
    cand.reserve(hx.size() + gx.size());
    for (std::size_t i = 0; i + 1 < hx.size(); ++i) cand.push_back(hx[i]);

    // Each breakpoint of g, translated by the unique integer that lands it
    // strictly inside h's lift range, contributes its preimage under h.
    const double lo = hy.front();
    for (std::size_t i = 0; i + 1 < gx.size(); ++i) {
        const double j0 = std::floor(lo - gx[i]);
        for (int d = 0; d <= 2; ++d) {
            const double c = gx[i] + j0 + static_cast<double>(d);
            if (c > lo && c < lo + 1.0) {
                const double t = interp_period_inverse(hx, hy, c);
                if (t > 0.0 && t < 1.0) cand.push_back(t);
            }
        }
    }
    if (cand.size() > CircleHomeoPL::kMaxBreakpoints) {
        throw std::length_error("compose: breakpoint budget exceeded");
    }

    std::sort(cand.begin(), cand.end());
    std::vector<double> xs;
    std::vector<double> ys;
    xs.reserve(cand.size() + 1);
    ys.reserve(cand.size() + 1);
    for (double t : cand) {
        if (!xs.empty() && t - xs.back() < kMinRelGap * t) continue;
        if (t >= 1.0 - kMinGap) break;
        const double v = g.lift(h.lift(t));
        // Deep compositions can flatten below double resolution (values
        // underflow, tie, or advance by less than their own quantization);
        // drop such breakpoints. The kept chord deviates from the true
        // composite by at most the skipped value span.
        if (!xs.empty() && (v <= ys.back() || v - ys.back() < kMinRelGap * v)) continue;
        xs.push_back(t);
        ys.push_back(v);
    }
    while (xs.size() > 1 && ys.front() + 1.0 - ys.back() < kMinRelGap) {
        xs.pop_back();
        ys.pop_back();
    }
    if (ys.front() >= 1.0) {
        for (double& v : ys) v -= 1.0;
    }
    xs.push_back(1.0);
    ys.push_back(ys.front() + 1.0);
    return CircleHomeoPL(std::move(xs), std::move(ys));
}

double lipschitz_certificate(const CircleHomeoPL& h) {
    return std::max(h.max_slope(), 1.0 / h.min_slope());
}

}  // namespace bilip
