#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>

#include "fblnet/analysis.hpp"
#include "fblnet/fbl.hpp"

using namespace fblnet;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

NetworkParams sec4(double alpha, double delta) {
    return params_from_config(2.0, -60.0, -90.0, 4.0, alpha, delta);
}
}  // namespace

TEST_CASE("interference intensity") {
    const NetworkParams full = sec4(1.0, 0.7);
    // full inversion: unit step times the closed-form prefactor
    const double w = 5.0 / full.rho_o;
    CHECK(interference_intensity(w, full) ==
          doctest::Approx(2.0 * std::pow(full.rho_o, 0.5) /
                          (4.0 * std::pow(w, 0.5)))
              .epsilon(1e-12));
    CHECK(interference_intensity(0.5 / full.rho_o, full) == 0.0);

    const NetworkParams p = sec4(0.5, 0.7);
    CHECK(interference_intensity(1e-8, p) <= 1e-12);  // vanishes towards w=0
    // pinned regression value computed with 50-digit arithmetic
    CHECK(interference_intensity(1e21, p) ==
          doctest::Approx(1.1107207345395916e-18).epsilon(1e-9));
    CHECK_THROWS_AS(interference_intensity(0.0, p), std::domain_error);
    CHECK_THROWS_AS(interference_intensity(-1.0, p), std::domain_error);
}

TEST_CASE("laplace transform basics") {
    const NetworkParams p = sec4(0.5, 0.7);
    CHECK(laplace_interference(0.0, 300.0, p) == 1.0);
    const NetworkParams silent = sec4(0.5, 0.0);
    CHECK(laplace_interference(1e13, 300.0, silent) == 1.0);

    const double s = std::pow(300.0, 2.0) / p.rho_o;  // theta = 1 at alpha = 0.5
    const double l = laplace_interference(s, 300.0, p);
    CHECK(l > 0.0);
    CHECK(l < 1.0);
}

TEST_CASE("laplace transform is nonincreasing in s") {
    const NetworkParams full = sec4(1.0, 0.7);
    double prev = 1.0 + 1e-12;
    for (int i = 0; i < 200; ++i) {
        const double theta = std::pow(10.0, -3.0 + 6.0 * i / 199.0);
        const double v = laplace_interference(theta / full.rho_o, 1.0, full);
        CHECK(v <= prev + 1e-10);
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
    const NetworkParams frac = sec4(0.5, 0.7);
    prev = 1.0 + 1e-12;
    for (int i = 0; i < 50; ++i) {
        const double theta = std::pow(10.0, -2.0 + 4.0 * i / 49.0);
        const double v =
            laplace_interference(theta * 9e4 / frac.rho_o, 300.0, frac);
        CHECK(v <= prev + 1e-8);
        prev = v;
    }
}

TEST_CASE("sinr cdf endpoints and monotonicity") {
    const NetworkParams full = sec4(1.0, 0.7);
    CHECK(sinr_cdf(0.0, full) == 0.0);
    CHECK(sinr_cdf(kInf, full) == 1.0);
    double prev = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double theta = std::pow(10.0, -3.0 + 7.0 * i / 199.0);
        const double v = sinr_cdf(theta, full);
        CHECK(v >= prev - 1e-10);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
    CHECK(prev > 0.99);  // theta = 1e4 is deep outage at these parameters

    const NetworkParams frac = sec4(0.5, 0.7);
    prev = 0.0;
    for (int i = 0; i < 40; ++i) {
        const double theta = std::pow(10.0, -2.0 + 5.0 * i / 39.0);
        const double v = sinr_cdf(theta, frac);
        CHECK(v >= prev - 1e-8);
        prev = v;
    }
}

TEST_CASE("outage bounds: degenerate and simplified forms") {
    const NetworkParams p = sec4(0.5, 0.7);
    const FblParams unit(1, 0.5);
    const RateValue rt{1.0};

    // with eps = 0.5 and n = 1 the penalty and bonus vanish
    const double ar = sinr_cdf(1.0, p);  // 2^1 - 1
    for (double split : {0.3, 1.0, 3.0}) {
        CHECK(outage_upper(rt, split, unit, p) == doctest::Approx(ar).epsilon(1e-9));
        CHECK(outage_lower(rt, split, unit, p) == doctest::Approx(ar).epsilon(1e-9));
    }

    const FblParams f128(128, 1e-2);
    const double simplified =
        sinr_cdf(sinr_threshold(rt, f128, kInf), p);
    CHECK(outage_upper(rt, kInf, f128, p) == doctest::Approx(simplified).epsilon(1e-9));
    CHECK_THROWS_AS(outage_upper(rt, 0.0, f128, p), std::domain_error);
    CHECK_THROWS_AS(outage_lower(rt, -1.0, f128, p), std::domain_error);
}

TEST_CASE("optimized bounds dominate the simplified pair") {
    const NetworkParams p = sec4(0.5, 0.7);
    const FblParams f128(128, 1e-2);
    for (double rt : {0.5, 2.0}) {
        const OutageBounds b = outage_bounds_opt({rt}, f128, p);
        CHECK(b.upper <= b.simplified_upper + 1e-12);
        CHECK(b.lower >= b.simplified_lower - 1e-12);
        CHECK(b.lower <= b.upper + 1e-9);
        CHECK(b.upper >= 0.0);
        CHECK(b.upper <= 1.0);
        CHECK(b.lower >= 0.0);
        // the simplified lower bound comes from a valid split too
        CHECK(b.simplified_lower <= b.simplified_upper + 1e-12);
    }
}

TEST_CASE("ar outage endpoints and n->infinity agreement") {
    const NetworkParams p = sec4(0.5, 0.7);
    CHECK(ar_outage({0.0}, p) == 0.0);
    CHECK(ar_outage({14.0}, p) > 0.999);

    const FblParams huge(100000000, 1e-2);
    const double lower_inf = sinr_cdf(sinr_threshold({1.0}, huge, 0.0), p);
    CHECK(std::fabs(ar_outage({1.0}, p) - lower_inf) < 1e-3);
}
