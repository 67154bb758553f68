// Piecewise-linear circle homeomorphisms: construction, evaluation,
// inversion, composition, slope certificates, and their failure modes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bilip/circle.hpp"

using namespace bilip;

namespace {

// Largest deviation of h from the reference map over a fixed probe grid.
double sup_deviation(const CircleHomeoPL& h, double (*ref)(double), int probes = 997) {
    double worst = 0.0;
    for (int i = 0; i < probes; ++i) {
        const double t = static_cast<double>(i) / probes;
        const double d = std::fabs(h.apply(t) - ref(t));
        worst = std::max(worst, std::min(d, 1.0 - d));  // circle distance
    }
    return worst;
}

double sup_pair_deviation(const CircleHomeoPL& f, const CircleHomeoPL& g, int probes = 997) {
    double worst = 0.0;
    for (int i = 0; i < probes; ++i) {
        const double t = static_cast<double>(i) / probes;
        const double d = std::fabs(f.apply(t) - g.apply(t));
        worst = std::max(worst, std::min(d, 1.0 - d));
    }
    return worst;
}

double ident(double t) { return t; }

}  // namespace

TEST_CASE("rotation shifts coordinates modulo one") {
    const CircleHomeoPL r = CircleHomeoPL::rotation(0.25);
    CHECK(r.apply(0.5) == 0.75);
    CHECK(r.apply(0.0) == 0.25);
    CHECK(r.apply(0.9) == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(r.lift(0.0) == 0.25);
    CHECK(r.lift(1.0) == 1.25);
    CHECK(r.lift(2.5) == 2.75);          // degree-one periodicity
    CHECK(r.apply(1.5) == r.apply(0.5));  // evaluation reduces mod 1
    CHECK(r.min_slope() == 1.0);
    CHECK(r.max_slope() == 1.0);
    CHECK(lipschitz_certificate(r) == 1.0);
}

TEST_CASE("identity and full-turn rotations coincide") {
    const CircleHomeoPL id = CircleHomeoPL::identity();
    CHECK(id.apply(0.37) == 0.37);
    CHECK(lipschitz_certificate(id) == 1.0);
    CHECK(CircleHomeoPL::rotation(1.0).apply(0.37) == doctest::Approx(0.37).epsilon(1e-15));
    CHECK(CircleHomeoPL::rotation(-0.25).apply(0.5) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("power map approximates t^alpha on a uniform grid") {
    const CircleHomeoPL p = CircleHomeoPL::power_map(2.0, 1024);
    CHECK(p.breakpoint_count() == 1025);
    CHECK(p.apply(0.0) == 0.0);
    CHECK(p.apply(0.5) == 0.25);  // grid point: exact
    // Off the grid, the chord error of t^2 with 1024 segments is below
    // (1/1024)^2 / 4.
    for (double t : {0.3, 0.7, 0.123, 0.9999}) {
        CHECK(p.apply(t) == doctest::Approx(t * t).epsilon(1e-6));
    }
    // First-segment slope is 1/segments and dominates the certificate
    // through its reciprocal; the steepest chord stays below alpha.
    CHECK(p.min_slope() == doctest::Approx(1.0 / 1024).epsilon(1e-15));
    CHECK(p.max_slope() == doctest::Approx(2047.0 / 1024.0).epsilon(1e-15));
    CHECK(lipschitz_certificate(p) == doctest::Approx(1024.0).epsilon(1e-15));

    CHECK_THROWS_AS(CircleHomeoPL::power_map(-1.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(CircleHomeoPL::power_map(2.0, 0), std::invalid_argument);
    // One segment degenerates to the identity chord.
    CHECK(CircleHomeoPL::power_map(2.0, 1).apply(0.5) == 0.5);
}

TEST_CASE("square-root map is increasing and concave-approximating") {
    const CircleHomeoPL q = CircleHomeoPL::power_map(0.5, 1024);
    CHECK(q.apply(0.25) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(q.min_slope() > 0.0);
    CHECK(q.max_slope() > 1.0);
}

TEST_CASE("construction validates lift invariants") {
    // Valid two-segment map.
    CHECK_NOTHROW(CircleHomeoPL({0.0, 0.5, 1.0}, {0.0, 0.7, 1.0}));
    // Breakpoints must span [0,1].
    CHECK_THROWS_AS(CircleHomeoPL({0.0, 0.5}, {0.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(CircleHomeoPL({0.1, 1.0}, {0.1, 1.1}), std::invalid_argument);
    // Closure: F(1) = F(0) + 1.
    CHECK_THROWS_AS(CircleHomeoPL({0.0, 1.0}, {0.5, 1.2}), std::invalid_argument);
    // F(0) must lie in [0,1).
    CHECK_THROWS_AS(CircleHomeoPL({0.0, 1.0}, {-0.1, 0.9}), std::invalid_argument);
    CHECK_THROWS_AS(CircleHomeoPL({0.0, 1.0}, {1.0, 2.0}), std::invalid_argument);
    // Strictly increasing breakpoints and values.
    CHECK_THROWS_AS(CircleHomeoPL({0.0, 0.5, 0.5, 1.0}, {0.0, 0.2, 0.4, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(CircleHomeoPL({0.0, 0.5, 1.0}, {0.6, 0.5, 1.6}), std::invalid_argument);
    // Mismatched arrays.
    CHECK_THROWS_AS(CircleHomeoPL({0.0, 1.0}, {0.0, 0.5, 1.0}), std::invalid_argument);
}

TEST_CASE("inverse is the exact reflected polyline") {
    const CircleHomeoPL p = CircleHomeoPL::power_map(2.0, 1024);
    const CircleHomeoPL q = p.inverse();
    CHECK(q.apply(0.25) == 0.5);  // reflected grid point: exact
    CHECK(q.apply(p.apply(0.37)) == doctest::Approx(0.37).epsilon(1e-12));
    CHECK(q.min_slope() == doctest::Approx(1.0 / p.max_slope()).epsilon(1e-12));
    CHECK(q.max_slope() == doctest::Approx(1.0 / p.min_slope()).epsilon(1e-12));
    CHECK(lipschitz_certificate(q) == doctest::Approx(lipschitz_certificate(p)).epsilon(1e-12));

    const CircleHomeoPL r = CircleHomeoPL::rotation(0.3);
    CHECK(r.inverse().apply(0.3) == doctest::Approx(0.0).epsilon(1e-15));
    // Involution.
    CHECK(sup_pair_deviation(p.inverse().inverse(), p) <= 1e-12);
}

TEST_CASE("composition of rotations adds angles exactly") {
    const CircleHomeoPL r = compose(CircleHomeoPL::rotation(0.25), CircleHomeoPL::rotation(0.25));
    CHECK(r.apply(0.1) == doctest::Approx(0.6).epsilon(1e-15));
    // The wrap knots of both factors survive (one is collinear, and
    // composition does not prune collinear knots), but the slope is 1
    // everywhere and the map is exactly the half-turn.
    CHECK(r.breakpoint_count() <= 4);
    CHECK(r.min_slope() == 1.0);
    CHECK(r.max_slope() == 1.0);
    CHECK(lipschitz_certificate(r) == 1.0);
    for (double t : {0.0, 0.2, 0.49, 0.5, 0.51, 0.77}) {
        CHECK(r.apply(t) ==
              doctest::Approx(CircleHomeoPL::rotation(0.5).apply(t)).epsilon(1e-15));
    }
}

TEST_CASE("composition tracks the analytic composite") {
    const CircleHomeoPL p = CircleHomeoPL::power_map(2.0, 4096);
    const CircleHomeoPL p4 = CircleHomeoPL::power_map(4.0, 4096);
    const CircleHomeoPL pp = compose(p, p);
    // (t^2)^2 vs the direct grid approximation of t^4.
    CHECK(sup_pair_deviation(pp, p4) <= 1e-5);

    // Inverse round trips through composition.
    CHECK(sup_deviation(compose(p, p.inverse()), ident) <= 1e-11);
    CHECK(sup_deviation(compose(p.inverse(), p), ident) <= 1e-11);
}

TEST_CASE("composition satisfies the group axioms within tolerance") {
    const CircleHomeoPL f = CircleHomeoPL::rotation(0.41421356237309515);
    const CircleHomeoPL g = CircleHomeoPL::power_map(2.0, 512);
    const CircleHomeoPL h = CircleHomeoPL::power_map(0.5, 512);
    const CircleHomeoPL id = CircleHomeoPL::identity();

    CHECK(sup_pair_deviation(compose(compose(f, g), h), compose(f, compose(g, h))) <= 1e-9);
    CHECK(sup_pair_deviation(compose(id, g), g) <= 1e-12);
    CHECK(sup_pair_deviation(compose(g, id), g) <= 1e-12);
    CHECK(sup_deviation(compose(f, f.inverse()), ident) <= 1e-12);
    CHECK(sup_deviation(compose(g.inverse(), g), ident) <= 1e-11);
}

TEST_CASE("composition certificate multiplies at shared flats") {
    // Two squaring maps: the composite's flattest chord is the product of
    // the first-segment slopes, so the certificate is segments^2 up to the
    // breakpoint quantization of the composite.
    const CircleHomeoPL p = CircleHomeoPL::power_map(2.0, 64);
    const CircleHomeoPL pp = compose(p, p);
    CHECK(lipschitz_certificate(p) == doctest::Approx(64.0).epsilon(1e-15));
    CHECK(1.0 / pp.min_slope() == doctest::Approx(4096.0).epsilon(1e-12));
}

TEST_CASE("composition enforces the breakpoint budget") {
    const CircleHomeoPL big = CircleHomeoPL::power_map(2.0, 600000);
    CHECK_THROWS_AS(compose(big, big), std::length_error);
}

TEST_CASE("lift samples over a shifted period are rebased") {
    // Samples of a lift over [0.25, 1.25] describing rotation by 0.3.
    const CircleHomeoPL r =
        CircleHomeoPL::from_lift_samples({0.25, 1.25}, {0.55, 1.55});
    CHECK(r.apply(0.0) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(r.apply(0.5) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("breakpoints within the relative sliver gap are merged") {
    // A cluster of knots 1e-15 apart near t = 0.5 falls below the relative
    // gap and must collapse to a single knot in derived maps.
    const CircleHomeoPL h = CircleHomeoPL::from_lift_samples(
        {0.0, 0.5, 0.5 + 1e-15, 0.5 + 2e-15, 1.0},
        {0.0, 0.6, 0.6 + 1e-15, 0.6 + 2e-15, 1.0});
    CHECK(h.breakpoint_count() == 3);
    CHECK(h.apply(0.25) == doctest::Approx(0.3).epsilon(1e-12));

    // Deep in the cascade toward 0 the same absolute spacing is wide
    // relative to scale and must survive.
    const CircleHomeoPL deep = CircleHomeoPL::from_lift_samples(
        {0.0, 1e-30, 4096e-30, 0.5, 1.0}, {0.0, 2e-31, 5e-28, 0.7, 1.0});
    CHECK(deep.breakpoint_count() == 5);
}
