#include <doctest.h>

#include <cmath>

#include "rstrade/penalty.hpp"

using namespace rstrade;

TEST_CASE("strength constants match the canonical formulas") {
    const PenaltyFn pen = build_penalty(1e-4, canonical_params());
    CHECK(pen.c1 == doctest::Approx(1.3003).epsilon(1e-12));
    CHECK(pen.c0 == doctest::Approx(2.6006).epsilon(1e-12));
    CHECK(pen.eps == 1e-4);
}

TEST_CASE("barrier interpolates its pinned values") {
    const double eps = 5e-4;
    const PenaltyFn pen = build_penalty(eps, canonical_params());

    CHECK(pen.value(eps) == doctest::Approx(-pen.c1).epsilon(1e-14));
    CHECK(pen.value(2 * eps) == 0.0);
    CHECK(pen.value(3 * eps) == 0.0);
    CHECK(pen.value(100.0) == 0.0);
    // the spline is deepened to -6 c1 at 0 so that C^2 concavity is feasible;
    // -c0 with c0 = 2 c1 is unattainable for any such barrier
    CHECK(pen.value(0.0) == doctest::Approx(-pen.depth_at_zero()).epsilon(1e-14));
    CHECK(pen.value(0.0) <= -pen.c0);
}

TEST_CASE("shape sweep: nonpositive, nondecreasing, concave on [-1, 3 eps]") {
    ModelParams wide_fee = canonical_params();
    wide_fee.K = 0.05;
    for (double eps : {1e-4, 1e-3, 5e-3}) {
        const PenaltyFn pen = build_penalty(eps, wide_fee);
        const int n = 10000;
        double prev_value = pen.value(-1.0);
        double prev_slope = pen.slope(-1.0);
        for (int i = 0; i <= n; ++i) {
            const double x = -1.0 + (1.0 + 3.0 * eps) * i / n;
            const double v = pen.value(x);
            const double s = pen.slope(x);
            CHECK(v <= 0.0);
            CHECK(s >= 0.0);
            CHECK(pen.curvature(x) <= 0.0);
            // consistency of the sampled shape with the analytic derivatives
            CHECK(v >= prev_value - 1e-12);   // nondecreasing values
            CHECK(s <= prev_slope + 1e-9);    // nonincreasing slope = concavity
            prev_value = v;
            prev_slope = s;
        }
    }
}

TEST_CASE("C2 joins at the four knots") {
    ModelParams wide_fee = canonical_params();
    wide_fee.K = 0.05;
    const double eps = 2e-3;
    const PenaltyFn pen = build_penalty(eps, wide_fee);
    const double d = 1e-9;
    const double c1 = pen.c1;
    for (double knot : {0.0, eps, 2 * eps}) {
        // a step d across a knot may move the pieces by d * (local derivative bound)
        CHECK(std::abs(pen.value(knot - d) - pen.value(knot + d)) <= 20.0 * d * c1 / eps);
        CHECK(std::abs(pen.slope(knot - d) - pen.slope(knot + d))
              <= 20.0 * d * c1 / (eps * eps));
        CHECK(std::abs(pen.curvature(knot - d) - pen.curvature(knot + d))
              <= 20.0 * d * c1 / (eps * eps * eps));
    }
    // finite differences of value reproduce the analytic slope
    for (double x : {-0.5, -1e-4, 0.5 * eps, 1.2 * eps, 1.9 * eps}) {
        const double fd = (pen.value(x + d) - pen.value(x - d)) / (2 * d);
        CHECK(fd == doctest::Approx(pen.slope(x)).epsilon(1e-5));
    }
}

TEST_CASE("smaller eps steepens the barrier toward the indicator limit") {
    const ModelParams params = canonical_params();
    const PenaltyFn coarse = build_penalty(9e-4, params);  // just below K
    const PenaltyFn fine = build_penalty(1e-5, params);
    // at a fixed violation x < 0 the finer barrier is far deeper
    CHECK(fine.value(-1e-3) < 10.0 * coarse.value(-1e-3));
    // and beyond the active zone both vanish
    CHECK(fine.value(1e-3) == 0.0);
}

TEST_CASE("eps must be positive and below the fee") {
    const ModelParams params = canonical_params();  // K = 0.001
    CHECK_THROWS_AS(build_penalty(0.0, params), DomainError);
    CHECK_THROWS_AS(build_penalty(-1e-4, params), DomainError);
    CHECK_THROWS_AS(build_penalty(2e-3, params), DomainError);
}
