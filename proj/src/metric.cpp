#include "bilip/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "bilip/parallel.hpp"

namespace bilip {

namespace {

// Depth-first accumulation over the word trie. Each node contributes the
// pulled-back base distance of every sample pair to the accumulator of its
// sphere; weights are applied per sphere afterwards, so every table entry
// is the same ordered sum regardless of thread count (threads own disjoint
// row ranges) and regardless of the truncation radius (deeper radii extend
// the sum without reordering it).
template <typename P, typename DistFn, typename StepFn>
void trie_accumulate(const std::vector<GroupWord>& words,
                     const std::vector<std::pair<std::uint32_t, std::uint32_t>>& children,
                     int radius, const std::vector<P>& base_points, int row_begin, int row_end,
                     std::vector<std::vector<double>>& acc, const DistFn& dist,
                     const StepFn& step) {
    const int n = static_cast<int>(base_points.size());
    std::vector<std::vector<P>> stack(static_cast<std::size_t>(radius) + 1,
                                      std::vector<P>(static_cast<std::size_t>(n)));
    stack[0] = base_points;

    struct Rec {
        const std::vector<GroupWord>& words;
        const std::vector<std::pair<std::uint32_t, std::uint32_t>>& children;
        std::vector<std::vector<P>>& stack;
        std::vector<std::vector<double>>& acc;
        const DistFn& dist;
        const StepFn& step;
        int n, row_begin, row_end;

        void visit(std::uint32_t idx, int depth) {
            const std::vector<P>& pts = stack[static_cast<std::size_t>(depth)];
            std::vector<double>& a = acc[static_cast<std::size_t>(depth)];
            for (int i = row_begin; i < row_end; ++i) {
                const P pi = pts[static_cast<std::size_t>(i)];
                double* row = a.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n);
                for (int j = i + 1; j < n; ++j) {
                    row[j] += dist(pi, pts[static_cast<std::size_t>(j)]);
                }
            }
            const auto [c_begin, c_end] = children[idx];
            for (std::uint32_t c = c_begin; c < c_end; ++c) {
                const Letter l = words[c].letters().back();
                const Letter inv = inverse_letter(l);
                const std::vector<P>& src = stack[static_cast<std::size_t>(depth)];
                std::vector<P>& dst = stack[static_cast<std::size_t>(depth) + 1];
                for (int i = 0; i < n; ++i) {
                    dst[static_cast<std::size_t>(i)] = step(inv, src[static_cast<std::size_t>(i)]);
                }
                visit(c, depth + 1);
            }
        }
    };

    Rec rec{words, children, stack, acc, dist, step, n, row_begin, row_end};
    rec.visit(0, 0);
}

std::vector<std::vector<double>> combine_spheres(const WeightTable& wt,
                                                 const std::vector<std::vector<double>>& acc,
                                                 int n) {
    std::vector<std::vector<double>> table(static_cast<std::size_t>(n),
                                           std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double v = 0.0;
            for (int m = 0; m <= wt.radius(); ++m) {
                v += wt.weight_of_length(m) *
                     acc[static_cast<std::size_t>(m)]
                        [static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                         static_cast<std::size_t>(j)];
            }
            table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            table[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
        }
    }
    return table;
}

}  // namespace

RegularizedMetric RegularizedMetric::build(const SpaceSample& space,
                                           const GeneratorAction& action, const WeightTable& wt,
                                           const GroupWord& basepoint, int threads) {
    if (2 * basepoint.length() > wt.radius()) {
        throw std::invalid_argument(
            "RegularizedMetric: basepoint longer than R/2, tail bound not certifiable");
    }
    RegularizedMetric rm;
    rm.space_ = &space;
    rm.action_ = &action;
    rm.wt_ = &wt;
    rm.basepoint_ = basepoint;
    rm.threads_ = std::max(1, threads);
    rm.truncation_error_ = std::exp(wt.s() * basepoint.length()) * wt.tail_bound() *
                           space.diameter();

    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(space.size()));
    const GroupWord p_inv = basepoint.inverse();
    for (int i = 0; i < space.size(); ++i) {
        const Point x = space.has_coordinates() ? Point{space.coordinate(i)} : Point{i};
        pts.push_back(apply_word(action, p_inv, x));
    }
    rm.cache_ = rm.table_at(pts);
    return rm;
}

std::vector<Point> RegularizedMetric::transformed_sample(const GroupWord& w) const {
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(space_->size()));
    for (int i = 0; i < space_->size(); ++i) {
        const Point x = space_->has_coordinates() ? Point{space_->coordinate(i)} : Point{i};
        pts.push_back(apply_word(*action_, w, x));
    }
    return pts;
}

std::vector<std::vector<double>> RegularizedMetric::table_at(
    const std::vector<Point>& points) const {
    const int n = space_->size();
    if (static_cast<int>(points.size()) != n) {
        throw std::invalid_argument("table_at: point count must match the sample");
    }
    const auto children = prefix_child_ranges(*wt_);
    std::vector<std::vector<double>> acc(
        static_cast<std::size_t>(wt_->radius()) + 1,
        std::vector<double>(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0));

    if (std::holds_alternative<PointCloudAction>(*action_)) {
        const auto& act = std::get<PointCloudAction>(*action_);
        std::vector<int> base(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) base[static_cast<std::size_t>(i)] = std::get<int>(points[static_cast<std::size_t>(i)]);
        const auto& table = space_->table();
        const auto dist = [&table](int a, int b) {
            return table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        };
        const auto step = [&act](Letter l, int a) { return act.apply_letter(l, a); };
        parallel_rows(threads_, n, [&](int r0, int r1) {
            trie_accumulate<int>(wt_->words(), children, wt_->radius(), base, r0, r1, acc, dist,
                                 step);
        });
    } else {
        const auto& act = std::get<CircleAction>(*action_);
        std::vector<double> base(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) base[static_cast<std::size_t>(i)] = std::get<double>(points[static_cast<std::size_t>(i)]);
        const auto dist = [](double a, double b) { return SpaceSample::arc_distance(a, b); };
        const auto step = [&act](Letter l, double a) { return act.apply_letter(l, a); };
        parallel_rows(threads_, n, [&](int r0, int r1) {
            trie_accumulate<double>(wt_->words(), children, wt_->radius(), base, r0, r1, acc,
                                    dist, step);
        });
    }
    return combine_spheres(*wt_, acc, n);
}

LowerBoundReport verify_lower_bound_identity(const RegularizedMetric& rm) {
    if (!rm.basepoint().empty()) {
        throw std::invalid_argument("verify_lower_bound_identity: requires basepoint e");
    }
    LowerBoundReport rep;
    const int n = rm.space().size();
    bool first = true;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                if (rm.value(i, j) != 0.0) rep.violations += 1;
                continue;
            }
            const double slack = rm.value(i, j) - rm.space().dist(i, j);
            if (slack < 0.0) rep.violations += 1;
            if (first || slack < rep.min_slack) {
                rep.min_slack = slack;
                rep.worst = {i, j};
                first = false;
            }
        }
    }
    rep.pass = rep.violations == 0;
    return rep;
}

EquivarianceReport verify_equivariance(const RegularizedMetric& rm, const GroupWord& eta,
                                       const std::vector<std::pair<int, int>>& pairs) {
    const GroupWord& p = rm.basepoint();
    if (2 * (eta.length() + p.length()) > rm.weights().radius()) {
        throw std::invalid_argument("verify_equivariance: |eta| + |p| exceeds R/2");
    }
    EquivarianceReport rep;
    rep.eta = eta;
    rep.bound = 2.0 * std::exp(rm.weights().s() * (eta.length() + p.length())) *
                rm.weights().tail_bound() * rm.space().diameter();

    // Left side: the metric re-centered at eta*p, i.e. the sample pulled
    // back through the single reduced word (eta p)^-1.
    const GroupWord eta_p = eta.concat(p);
    const auto lhs = rm.table_at(rm.transformed_sample(eta_p.inverse()));

    // Right side: delta_p evaluated at eta^-1-shifted points; the shift and
    // the basepoint recentering are applied in separate stages.
    std::vector<Point> rhs_pts = rm.transformed_sample(eta.inverse());
    const GroupWord p_inv = p.inverse();
    for (Point& q : rhs_pts) q = apply_word(rm.action(), p_inv, q);
    const auto rhs = rm.table_at(rhs_pts);

    for (const auto& [i, j] : pairs) {
        const double r = std::abs(lhs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                                  rhs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        if (r > rep.max_residual) {
            rep.max_residual = r;
            rep.worst = {i, j};
        }
    }
    rep.pass = rep.max_residual <= rep.bound;
    return rep;
}

EquivarianceReport verify_equivariance(const RegularizedMetric& rm, const GroupWord& eta) {
    std::vector<std::pair<int, int>> pairs;
    const int n = rm.space().size();
    pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    return verify_equivariance(rm, eta, pairs);
}

SandwichReport verify_bilipschitz_sandwich(const RegularizedMetric& rm, const GroupWord& p) {
    if (!rm.basepoint().empty()) {
        throw std::invalid_argument("verify_bilipschitz_sandwich: requires basepoint e");
    }
    if (2 * p.length() > rm.weights().radius()) {
        throw std::invalid_argument("verify_bilipschitz_sandwich: |p| exceeds R/2");
    }
    SandwichReport rep;
    rep.p = p;
    rep.upper_factor = std::exp(rm.weights().s() * p.length());
    rep.lower_factor = rm.weights().weight_of_length(p.length());
    rep.eps_t = 2.0 * rep.upper_factor * rm.weights().tail_bound() * rm.space().diameter();

    const auto dp = rm.table_at(rm.transformed_sample(p.inverse()));

    const int n = rm.space().size();
    bool first_ratio = true;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double de = rm.value(i, j);
            const double dpv = dp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            const double lower_violation = (rep.lower_factor * de - rep.eps_t) - dpv;
            const double upper_violation = dpv - (rep.upper_factor * de + rep.eps_t);
            if (lower_violation > rep.max_lower_violation) {
                rep.max_lower_violation = lower_violation;
                rep.worst = {i, j};
            }
            if (upper_violation > rep.max_upper_violation) {
                rep.max_upper_violation = upper_violation;
                rep.worst = {i, j};
            }
            if (de < kDegeneratePairCutoff) {
                rep.degenerate_pairs += 1;
                continue;
            }
            const double ratio = dpv / de;
            if (first_ratio) {
                rep.min_ratio = ratio;
                rep.max_ratio = ratio;
                first_ratio = false;
            } else {
                rep.min_ratio = std::min(rep.min_ratio, ratio);
                rep.max_ratio = std::max(rep.max_ratio, ratio);
            }
        }
    }
    rep.pass = rep.max_lower_violation <= 0.0 && rep.max_upper_violation <= 0.0;
    return rep;
}

GeneratorBilipschitzReport verify_generator_bilipschitz(const RegularizedMetric& rm,
                                                        const GroupWord& psi) {
    if (!rm.basepoint().empty()) {
        throw std::invalid_argument("verify_generator_bilipschitz: requires basepoint e");
    }
    if (2 * psi.length() > rm.weights().radius()) {
        throw std::invalid_argument("verify_generator_bilipschitz: |psi| exceeds R/2");
    }
    GeneratorBilipschitzReport rep;
    rep.psi = psi;

    const auto image = rm.table_at(rm.transformed_sample(psi));

    const int n = rm.space().size();
    const double factor = std::exp(rm.weights().s() * psi.length());
    const double eps_t = 2.0 * factor * rm.weights().tail_bound() * rm.space().diameter();
    double min_value = 0.0;
    bool first = true;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double de = rm.value(i, j);
            const double im = image[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (de < kDegeneratePairCutoff || im < kDegeneratePairCutoff) {
                rep.degenerate_pairs += 1;
                continue;
            }
            const double ratio = std::max(im / de, de / im);
            if (ratio > rep.constant) {
                rep.constant = ratio;
                rep.worst = {i, j};
            }
            const double lo = std::min(de, im);
            if (first || lo < min_value) {
                min_value = lo;
                first = false;
            }
        }
    }
    // The image table is the metric re-centered at psi^-1, so the sandwich
    // there gives ratio <= e^{s|psi|} up to eps_t spread over the smallest
    // distance that entered any ratio.
    rep.eps_rel = first ? 0.0 : eps_t / (factor * min_value);
    rep.bound = factor * (1.0 + rep.eps_rel);
    rep.pass = rep.constant <= rep.bound;
    return rep;
}

NeighborhoodWitnessReport neighborhood_witness(const RegularizedMetric& rm, int x,
                                               double epsilon) {
    if (!rm.basepoint().empty()) {
        throw std::invalid_argument("neighborhood_witness: requires basepoint e");
    }
    if (!(epsilon > 2.0 * rm.truncation_error())) {
        throw std::invalid_argument(
            "neighborhood_witness: epsilon not above twice the truncation error");
    }
    NeighborhoodWitnessReport rep;
    rep.x = x;
    rep.epsilon = epsilon;

    const WeightTable& wt = rm.weights();
    const double d = rm.space().diameter();
    int r = -1;
    for (int cand = 0; cand <= wt.radius(); ++cand) {
        const double outer = wt.sphere_mass(cand + 1, wt.radius()) * d + wt.tail_bound() * d;
        if (outer < epsilon / 2.0) {
            r = cand;
            break;
        }
    }
    if (r < 0) {
        throw std::runtime_error(
            "neighborhood_witness: no admissible ball radius; increase the truncation radius");
    }
    rep.r = r;

    double ball_mass = wt.sphere_mass(0, r);
    rep.b = (epsilon / 2.0) / ball_mass * (1.0 - 1e-9);
    while (ball_mass * rep.b >= epsilon / 2.0) rep.b *= 0.5;

    for (const GroupWord& w : wt.words()) {
        if (w.length() > r) break;  // canonical order: lengths ascending
        rep.words_in_a += 1;
    }

    const Point px = rm.space().has_coordinates() ? Point{rm.space().coordinate(x)} : Point{x};
    const int n = rm.space().size();
    for (int y = 0; y < n; ++y) {
        const Point py = rm.space().has_coordinates() ? Point{rm.space().coordinate(y)} : Point{y};
        double worst = 0.0;
        for (const GroupWord& w : wt.words()) {
            if (w.length() > r) break;
            const GroupWord w_inv = w.inverse();
            const Point qx = apply_word(rm.action(), w_inv, px);
            const Point qy = apply_word(rm.action(), w_inv, py);
            const double dd =
                rm.space().has_coordinates()
                    ? SpaceSample::arc_distance(std::get<double>(qx), std::get<double>(qy))
                    : rm.space().dist(std::get<int>(qx), std::get<int>(qy));
            worst = std::max(worst, dd);
            if (worst >= rep.b) break;
        }
        if (worst < rep.b) {
            rep.candidates += 1;
            if (!(rm.value(x, y) < epsilon)) {
                rep.verified = false;
                return rep;
            }
        }
    }
    rep.verified = rep.candidates >= 1;
    return rep;
}

LipschitzAdjustmentReport verify_lipschitz_adjustment(const RegularizedMetric& rm, double l,
                                                      double u) {
    LipschitzAdjustmentReport rep;
    rep.l = l;
    rep.u = u;
    rep.s = rm.weights().s();

    // Parameter gate: growth estimate below u, the exponent shift
    // e^{-s} L <= e^{-u}, and every generator L-Lipschitz for the base
    // metric (slope certificate on the circle, exact orbit check on clouds).
    const double growth = estimate_critical_exponent(rm.weights().sphere_counts());
    if (!(u > growth)) {
        rep.parameter_failure = "u must exceed the growth estimate";
        return rep;
    }
    if (!(std::exp(-rep.s) * l <= std::exp(-u))) {
        rep.parameter_failure = "e^{-s} L <= e^{-u} fails";
        return rep;
    }
    if (std::holds_alternative<CircleAction>(rm.action())) {
        for (const auto& map : std::get<CircleAction>(rm.action()).maps) {
            if (!(lipschitz_certificate(map) <= l)) {
                rep.parameter_failure = "a generator exceeds the declared Lipschitz constant";
                return rep;
            }
        }
    } else {
        const auto& act = std::get<PointCloudAction>(rm.action());
        const int n = rm.space().size();
        for (const auto& map : act.maps) {
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    const double moved = rm.space().dist(map[static_cast<std::size_t>(i)],
                                                         map[static_cast<std::size_t>(j)]);
                    if (!(moved <= l * rm.space().dist(i, j))) {
                        rep.parameter_failure =
                            "a generator exceeds the declared Lipschitz constant";
                        return rep;
                    }
                }
            }
        }
    }

    double tail_u = 0.0;
    try {
        tail_u = free_tail_bound(rm.weights().generators().k, u, rm.weights().radius());
    } catch (const std::invalid_argument&) {
        rep.parameter_failure = "u does not dominate the free growth rate";
        return rep;
    }
    rep.parameters_ok = true;

    double ball_sum = 0.0;
    for (int m = 0; m <= rm.weights().radius(); ++m) {
        ball_sum += std::exp(-u * m) *
                    static_cast<double>(rm.weights().sphere_counts()[static_cast<std::size_t>(m)]);
    }
    rep.c_u = ball_sum + tail_u;

    const int n = rm.space().size();
    bool ok = true;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double base = rm.space().dist(i, j);
            const double de = rm.value(i, j);
            if (base < kDegeneratePairCutoff) {
                rep.degenerate_pairs += 1;
                if (de > rep.c_u * base) ok = false;
                continue;
            }
            const double ratio = de / base;
            if (ratio > rep.max_ratio) {
                rep.max_ratio = ratio;
                rep.worst = {i, j};
            }
            if (de > rep.c_u * base) ok = false;
        }
    }
    rep.pass = ok;
    return rep;
}

}  // namespace bilip
