#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>
#include <random>

#include "fblnet/analysis.hpp"
#include "fblnet/meta.hpp"
#include "fblnet/simulator.hpp"

using namespace fblnet;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

NetworkParams sec4(double alpha, double delta) {
    return params_from_config(2.0, -60.0, -90.0, 4.0, alpha, delta);
}

// tagged BS at the origin plus three interfering cells, hand-placed
NetworkRealization toy_realization() {
    NetworkRealization r;
    r.bs_positions = {{0.0, 0.0}, {700.0, 0.0}, {-400.0, 500.0}, {100.0, -800.0}};
    r.ue_positions = {{120.0, 50.0}, {640.0, 180.0}, {-310.0, 420.0}, {260.0, -750.0}};
    r.has_ue = {1, 1, 1, 1};
    r.serving_distance.resize(4);
    for (int i = 0; i < 4; ++i)
        r.serving_distance[i] = std::hypot(r.ue_positions[i].x - r.bs_positions[i].x,
                                           r.ue_positions[i].y - r.bs_positions[i].y);
    r.tagged_bs = 0;
    r.region_half_width = 1500.0;
    r.guard_margin = 100.0;
    return r;
}
}  // namespace

TEST_CASE("success probability bound: closed forms") {
    const NetworkRealization real = toy_realization();
    const NetworkParams p = sec4(1.0, 0.7);
    CHECK(success_prob_lb(real, 0, 0.0, p) == 1.0);

    const NetworkParams silent = sec4(1.0, 0.0);
    const double theta = 2.0;
    CHECK(success_prob_lb(real, 0, theta, silent) ==
          doctest::Approx(std::exp(-theta * silent.noise / silent.rho_o))
              .epsilon(1e-12));
    CHECK_THROWS_AS(success_prob_lb(real, 9, 1.0, p), std::out_of_range);
}

TEST_CASE("success probability bound equals the threshold-event probability") {
    // oracle: enumerate the 2^3 activity patterns, Monte Carlo the fading
    const NetworkRealization real = toy_realization();
    const NetworkParams p = sec4(1.0, 0.7);
    const double theta = 1.0;
    const double bound = success_prob_lb(real, 0, theta, p);

    double gains[3];
    for (int j = 1; j <= 3; ++j) {
        const double u = std::hypot(real.ue_positions[j].x, real.ue_positions[j].y);
        gains[j - 1] = p.rho_o * std::pow(real.serving_distance[j], p.alpha * p.eta) *
                       std::pow(u, -p.eta);
    }
    std::mt19937_64 rng(42);
    std::exponential_distribution<double> exp1(1.0);
    const long draws = 1000000;
    double acc = 0.0;
    for (int pattern = 0; pattern < 8; ++pattern) {
        double pr = 1.0;
        for (int j = 0; j < 3; ++j)
            pr *= (pattern >> j & 1) ? p.delta : 1.0 - p.delta;
        long hits = 0;
        const long n = draws / 8;
        for (long it = 0; it < n; ++it) {
            double interference = 0.0;
            for (int j = 0; j < 3; ++j)
                if (pattern >> j & 1) interference += exp1(rng) * gains[j];
            const double omega = p.rho_o * exp1(rng) / (interference + p.noise);
            hits += (omega > theta);
        }
        acc += pr * hits / n;
    }
    // MC s.e. is about 4e-4 here; allow 4 sigma
    CHECK(std::fabs(acc - bound) < 4.0 * 4.5e-4);
}

TEST_CASE("threshold moments: limits, monotonicity, moment inequalities") {
    const NetworkParams p = sec4(1.0, 0.7);
    CHECK(threshold_moment({0.0, 0.0}, 1.7, p).real() == 1.0);
    CHECK(threshold_moment({2.0, 0.0}, 0.0, p).real() == 1.0);

    double prev = 1.0;
    for (double b : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const Complex m = threshold_moment({b, 0.0}, 1.0, p);
        CHECK(std::fabs(m.imag()) < 1e-10);
        CHECK(m.real() <= prev + 1e-9);
        CHECK(m.real() > 0.0);
        prev = m.real();
    }

    for (double alpha : {0.5, 1.0}) {
        const NetworkParams q = sec4(alpha, 0.7);
        for (double theta : {0.4, 1.0, 3.0}) {
            const MomentPair m = threshold_moment_pair(theta, q);
            CHECK(m.m2 <= m.m1 + 1e-6);
            CHECK(m.m2 >= m.m1 * m.m1 - 1e-6);
        }
    }
}

TEST_CASE("first moment equals the SINR survival function") {
    // both sides integrate the same geometry through different code paths
    for (double alpha : {0.5, 1.0}) {
        const NetworkParams p = sec4(alpha, 0.7);
        for (double theta : {0.5, 2.0}) {
            const double m1 = threshold_moment({1.0, 0.0}, theta, p).real();
            CHECK(m1 == doctest::Approx(1.0 - sinr_cdf(theta, p)).epsilon(1e-6));
        }
    }
}

TEST_CASE("imaginary-order moments stay inside the unit disc") {
    const NetworkParams p = sec4(1.0, 0.7);
    for (double t : {0.3, 1.0, 4.0, 15.0})
        CHECK(std::abs(threshold_moment({0.0, t}, 1.0, p)) <= 1.0 + 1e-9);
}

TEST_CASE("beta moment matching") {
    const auto [s1, s2] = beta_fit({0.5, 0.3});
    CHECK(s1 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s2 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(beta_fit({1.0, 1.0}), degeneracy_error);
    CHECK_THROWS_AS(beta_fit({0.5, 0.25}), degeneracy_error);

    // round trip: moments of Beta(a,b) match back to (a,b)
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> shape(0.4, 6.0);
    for (int i = 0; i < 20; ++i) {
        const double a = shape(rng), b = shape(rng);
        const double m1 = a / (a + b);
        const double m2 = m1 * (a + 1.0) / (a + b + 1.0);
        const auto [fa, fb] = beta_fit({m1, m2});
        CHECK(fa == doctest::Approx(a).epsilon(1e-10));
        CHECK(fb == doctest::Approx(b).epsilon(1e-10));
    }
}

TEST_CASE("meta beta curve: endpoints, degeneracy, monotonicity") {
    CHECK(meta_beta_from_moments(0.5, {0.5, 0.3}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(meta_beta_from_moments(1e-9, {0.5, 0.3}) == doctest::Approx(1.0).epsilon(1e-6));
    // degenerate moments collapse to a step at m1
    CHECK(meta_beta_from_moments(0.3, {0.6, 0.36}) == 1.0);
    CHECK(meta_beta_from_moments(0.9, {0.6, 0.36}) == 0.0);

    const NetworkParams p = sec4(1.0, 0.7);
    const FblParams fbl(128, 1e-5);
    double prev_at_half = 1.0;
    for (double rt : {0.5, 1.2, 1.5}) {
        const MomentPair m =
            threshold_moment_pair(sinr_threshold({rt}, fbl, kInf), p);
        double prev = 1.0;
        for (int i = 1; i <= 50; ++i) {
            const double pth = i / 51.0;
            const double v = meta_beta_from_moments(pth, m);
            CHECK(v <= prev + 1e-12);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            prev = v;
        }
        const double at_half = meta_beta_from_moments(0.5, m);
        CHECK(at_half <= prev_at_half + 1e-12);  // nonincreasing in the rate
        prev_at_half = at_half;
    }
}

TEST_CASE("gil-pelaez meta agrees with the beta approximation") {
    const NetworkParams p = sec4(1.0, 0.7);
    const FblParams fbl(128, 1e-5);
    const double beta = meta_beta(0.5, {0.5}, fbl, p);
    const double gp = meta_gil_pelaez(0.5, {0.5}, fbl, p);
    CHECK(std::fabs(gp - beta) < 0.05);
}

TEST_CASE("ar meta dominates the finite-blocklength meta") {
    const NetworkParams p = sec4(1.0, 0.7);
    const FblParams fbl(128, 1e-5);
    CHECK(ar_meta(0.3, {0.0}, p) == 1.0);
    CHECK(ar_meta(0.99, {0.0}, p) == 1.0);
    for (double rt : {0.5, 1.2}) {
        for (int i = 1; i <= 9; ++i) {
            const double pth = 0.1 * i;
            CHECK(ar_meta(pth, {rt}, p) >= meta_beta(pth, {rt}, fbl, p) - 1e-9);
        }
    }
}

TEST_CASE("success bound never exceeds the simulated success probability") {
    // statistical check over random small-network realizations
    const NetworkParams p = sec4(1.0, 0.7);
    const FblParams fbl(128, 1e-5);
    const double rt = 1.0;
    const double theta = sinr_threshold({rt}, fbl, kInf);
    SimConfig cfg;
    cfg.seed = 99;
    cfg.region_km = 8.0;
    cfg.guard_km = 1.5;
    const Philox eng(cfg.seed);

    const int realizations = 100;
    const long slots = 2000;
    int violations = 0;
    for (int r = 0; r < realizations; ++r) {
        const NetworkRealization real = sample_network(p, cfg, r);
        const double lb = success_prob_lb(real, real.tagged_bs, theta, p);
        RngStream fading(eng, make_stream(StreamPurpose::OutageFading, r));
        long ok = 0;
        for (long t = 0; t < slots; ++t)
            ok += (fbr_rate(sample_sinr(real, p, fading), fbl).bits_per_channel_use >
                   rt);
        const double exact = static_cast<double>(ok) / slots;
        const double se = std::sqrt(std::max(exact * (1.0 - exact), 1e-6) / slots);
        if (lb > exact + 2.0 * se) ++violations;
    }
    CHECK(violations <= 8);
}
