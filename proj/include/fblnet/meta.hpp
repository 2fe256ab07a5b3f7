#pragma once

#include <stdexcept>
#include <utility>

#include "fblnet/fbl.hpp"
#include "fblnet/meta_types.hpp"
#include "fblnet/network.hpp"
#include "fblnet/numerics.hpp"
#include "fblnet/simulator.hpp"

namespace fblnet {

/// Thrown by beta_fit when the moment pair has (numerically) zero variance.
class degeneracy_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Closed-form conditional success probability bound for the tagged link of
/// a fixed realization: product of per-interferer activity/fading factors
/// times the noise exponential. Exact for the event {Ω > theta}.
double success_prob_lb(const NetworkRealization& real, std::size_t tagged_index,
                       double theta, const NetworkParams& params);

/// Moment of order b of the success-probability bound at SINR threshold
/// theta, averaged over geometry. Real b gives real moments; b = jt gives
/// the imaginary-order moments used by Gil-Pelaez.
Complex threshold_moment(Complex b, double theta, const NetworkParams& params);

MomentPair threshold_moment_pair(double theta, const NetworkParams& params);

/// Moment of the FBR success bound: threshold_moment at θ = 2^(R+a(∞)-b)-1.
Complex moment_hat(Complex b, RateValue rt, const FblParams& fbl,
                   const NetworkParams& params);

/// Beta shape parameters matching (m1, m2); throws degeneracy_error when
/// m2 <= m1² within tolerance.
std::pair<double, double> beta_fit(const MomentPair& m);

/// Beta approximation of the meta distribution; degenerate moments fall
/// back to a step function at m1.
double meta_beta_from_moments(double p_th, const MomentPair& m);
double meta_beta(double p_th, RateValue rt, const FblParams& fbl,
                 const NetworkParams& params);

/// Gil-Pelaez evaluation of the meta distribution from imaginary-order
/// moments of the success bound.
double meta_gil_pelaez(double p_th, RateValue rt, const FblParams& fbl,
                       const NetworkParams& params);

/// Asymptotic-regime meta distribution: same pipeline at θ = 2^R - 1.
double ar_meta(double p_th, RateValue rt, const NetworkParams& params);

}  // namespace fblnet
