#include "fblnet/network.hpp"

#include <cmath>
#include <stdexcept>

namespace fblnet {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

NetworkParams::NetworkParams(double lambda_bs_, double eta_, double alpha_,
                             double rho_o_, double noise_, double delta_)
    : lambda_bs(lambda_bs_),
      eta(eta_),
      alpha(alpha_),
      rho_o(rho_o_),
      noise(noise_),
      delta(delta_) {
    if (!(lambda_bs > 0.0)) throw std::domain_error("NetworkParams: lambda_bs must be > 0");
    if (!(eta > 2.0))
        throw std::domain_error("NetworkParams: eta must be > 2 (interference integral diverges)");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::domain_error("NetworkParams: alpha must be in [0,1]");
    if (!(rho_o > 0.0)) throw std::domain_error("NetworkParams: rho_o must be > 0");
    if (!(noise >= 0.0)) throw std::domain_error("NetworkParams: noise must be >= 0");
    if (!(delta >= 0.0 && delta <= 1.0))
        throw std::domain_error("NetworkParams: delta must be in [0,1]");
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) {
    if (!(watt > 0.0)) throw std::domain_error("watt_to_dbm: power must be > 0");
    return 10.0 * std::log10(watt) + 30.0;
}

NetworkParams params_from_config(double lambda_per_km2, double rho_dbm,
                                 double noise_dbm, double eta, double alpha,
                                 double delta) {
    return NetworkParams(lambda_per_km2 * 1e-6, eta, alpha, dbm_to_watt(rho_dbm),
                         dbm_to_watt(noise_dbm), delta);
}

double ServingDistanceDensity::pdf(double r) const {
    if (r < 0.0) return 0.0;
    return 2.0 * kPi * lambda_bs * r * std::exp(-kPi * lambda_bs * r * r);
}

double ServingDistanceDensity::cdf(double r) const {
    if (r <= 0.0) return 0.0;
    return -std::expm1(-kPi * lambda_bs * r * r);
}

double ServingDistanceDensity::median() const {
    return std::sqrt(std::log(2.0) / (kPi * lambda_bs));
}

double serving_distance_pdf(double r0, const NetworkParams& params) {
    return ServingDistanceDensity{params.lambda_bs}.pdf(r0);
}

}  // namespace fblnet
