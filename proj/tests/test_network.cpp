#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fblnet/network.hpp"
#include "fblnet/numerics.hpp"

using namespace fblnet;

TEST_CASE("unit conversions") {
    CHECK(params_from_config(2.0, -60.0, -90.0, 4.0, 0.5, 0.7).lambda_bs ==
          doctest::Approx(2e-6).epsilon(1e-14));
    CHECK(dbm_to_watt(-60.0) == doctest::Approx(1e-9).epsilon(1e-13));
    CHECK(dbm_to_watt(-90.0) == doctest::Approx(1e-12).epsilon(1e-13));
    CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0).epsilon(1e-14));
    const NetworkParams p = params_from_config(2.0, -60.0, -90.0, 4.0, 0.5, 0.7);
    CHECK(10.0 * std::log10(p.rho_o / p.noise) == doctest::Approx(30.0).epsilon(1e-12));

    for (double dbm = -120.0; dbm <= 40.0; dbm += 3.7)
        CHECK(watt_to_dbm(dbm_to_watt(dbm)) == doctest::Approx(dbm).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(params_from_config(2.0, -60, -90, 2.0, 0.5, 0.7),
                    std::domain_error);  // divergent interference
    CHECK_THROWS_AS(params_from_config(2.0, -60, -90, 4.0, 1.5, 0.7),
                    std::domain_error);
    CHECK_THROWS_AS(params_from_config(-2.0, -60, -90, 4.0, 0.5, 0.7),
                    std::domain_error);
    CHECK_THROWS_AS(params_from_config(2.0, -60, -90, 4.0, 0.5, 1.2),
                    std::domain_error);
    CHECK_NOTHROW(params_from_config(2.0, -60, -90, 4.0, 1.0, 0.0));
}

TEST_CASE("serving distance density") {
    const NetworkParams p = params_from_config(2.0, -60, -90, 4.0, 0.5, 0.7);
    CHECK(serving_distance_pdf(0.0, p) == 0.0);
    const ServingDistanceDensity d{p.lambda_bs};

    const double mass = integrate_semi_infinite(
        [&](double r) { return d.pdf(r); }, 0.0, {1e-10, 1e-14, 4000});
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));

    // closed-form CDF inversion: median = sqrt(ln 2 / (pi*lambda))
    CHECK(d.median() == doctest::Approx(332.14123513398).epsilon(1e-9));
    CHECK(d.cdf(d.median()) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.pdf(250.0) ==
          doctest::Approx(2 * 3.14159265358979324 * 2e-6 * 250.0 *
                          std::exp(-3.14159265358979324 * 2e-6 * 250.0 * 250.0))
              .epsilon(1e-12));
}
