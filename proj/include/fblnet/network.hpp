#pragma once

namespace fblnet {

/// Physical model of the uplink network, strict SI units internally
/// (meters, watts). Use params_from_config for km⁻²/dBm inputs.
struct NetworkParams {
    NetworkParams(double lambda_bs_, double eta_, double alpha_, double rho_o_,
                  double noise_, double delta_);
    double lambda_bs;  // BS intensity, BS/m²
    double eta;        // path-loss exponent, > 2
    double alpha;      // power-control compensation factor in [0,1]
    double rho_o;      // power-control parameter, W
    double noise;      // noise power, W
    double delta;      // UE activity probability in [0,1]
};

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

NetworkParams params_from_config(double lambda_per_km2, double rho_dbm,
                                 double noise_dbm, double eta, double alpha,
                                 double delta);

/// Rayleigh law of the distance between a UE and its nearest BS.
struct ServingDistanceDensity {
    double lambda_bs;
    double pdf(double r) const;
    double cdf(double r) const;
    double median() const;
};

double serving_distance_pdf(double r0, const NetworkParams& params);

}  // namespace fblnet
