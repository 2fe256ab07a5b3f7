#pragma once

namespace fblnet {

/// Blocklength and target frame error rate of the short-code link.
struct FblParams {
    FblParams(long n_, double eps_bar_);
    long n;
    double eps_bar;
};

struct RateValue {
    double bits_per_channel_use = 0.0;
};

/// Channel dispersion V(Ω) = Ω(Ω+2)log₂²(e)/(Ω+1)², in bits².
/// Nondecreasing on [0,∞), bounded by log₂²(e); accepts Ω = ∞.
double channel_dispersion(double omega);

/// Inverse Gaussian tail: x with Q(x) = eps, eps in (0,1).
double q_inverse(double eps);

/// Dispersion penalty a(x) = sqrt(V(x)/n)·Q⁻¹(ε̄); accepts x = ∞.
double penalty_a(double x, const FblParams& fbl);

/// Blocklength bonus b = log₂(n)/(2n).
double bonus_b(const FblParams& fbl);

/// Normal-approximation coding rate log₂(1+Ω) - a(Ω) + b, bits/channel use.
RateValue fbr_rate(double omega, const FblParams& fbl);

/// SINR threshold 2^(R + a(x) - b) - 1, clamped at 0.
double sinr_threshold(RateValue rt, const FblParams& fbl, double x);

}  // namespace fblnet
