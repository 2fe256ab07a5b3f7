#pragma once

#include "fblnet/fbl.hpp"
#include "fblnet/network.hpp"

namespace fblnet {

/// Rate-outage bounds together with the threshold parameters that
/// produced them.
struct OutageBounds {
    double upper = 1.0;
    double lower = 0.0;
    double upsilon_opt = 0.0;  // +inf means the simplified bound was best
    double lambda_opt = 0.0;   // 0 means the simplified bound was best
    double simplified_upper = 1.0;
    double simplified_lower = 0.0;
};

/// Intensity of the mapped interferer process on the w = |z|^η/P axis.
/// α is routed to the analytic limit branch above 1-1e-9.
double interference_intensity(double w, const NetworkParams& params);

/// Laplace transform of the aggregate interference power conditioned on
/// serving distance r0: exp{-∫ λ(w)·δs/(w+s) dw} from w_min = r0^{η(1-α)}/ρ₀.
double laplace_interference(double s, double r0, const NetworkParams& params);

/// CDF of the uplink SINR.
double sinr_cdf(double theta, const NetworkParams& params);

// Three-term outage bounds for a given split point; see outage_bounds_opt
// for the optimized versions. upsilon/lam = +inf and ->0 recover the
// simplified bounds.
double outage_upper(RateValue rt, double upsilon, const FblParams& fbl,
                    const NetworkParams& params);
double outage_lower(RateValue rt, double lam, const FblParams& fbl,
                    const NetworkParams& params);

/// Numerically optimized upper/lower bounds plus the simplified pair.
OutageBounds outage_bounds_opt(RateValue rt, const FblParams& fbl,
                               const NetworkParams& params);

/// Asymptotic-regime outage F_Ω(2^R - 1).
double ar_outage(RateValue rt, const NetworkParams& params);

}  // namespace fblnet
