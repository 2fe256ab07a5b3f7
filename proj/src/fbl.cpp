#include "fblnet/fbl.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fblnet {

namespace {

constexpr double kLog2E = 1.4426950408889634;          // log2(e)
constexpr double kVinf = kLog2E * kLog2E;              // dispersion limit
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

double gaussian_tail(double x) { return 0.5 * std::erfc(x / kSqrt2); }

// Acklam's rational approximation of the standard-normal quantile,
// ~1.15e-9 relative accuracy before refinement.
double norm_ppf_approx(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

FblParams::FblParams(long n_, double eps_bar_) : n(n_), eps_bar(eps_bar_) {
    if (n < 1) throw std::domain_error("FblParams: n must be >= 1");
    if (!(eps_bar > 0.0 && eps_bar < 1.0))
        throw std::domain_error("FblParams: eps_bar must be in (0,1)");
}

double channel_dispersion(double omega) {
    if (std::isnan(omega) || omega < 0.0)
        throw std::domain_error("channel_dispersion: omega must be >= 0");
    if (std::isinf(omega)) return kVinf;
    const double u = 1.0 + omega;
    return (1.0 - 1.0 / (u * u)) * kVinf;
}

double q_inverse(double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::domain_error("q_inverse: eps must be in (0,1)");
    if (eps == 0.5) return 0.0;
    // Q(x) = Phi(-x), so start from -Phi^-1(eps) and polish one Newton step
    double x = -norm_ppf_approx(eps);
    const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
    if (pdf > 0.0) x += (gaussian_tail(x) - eps) / pdf;
    return x;
}

double penalty_a(double x, const FblParams& fbl) {
    if (fbl.eps_bar == 0.5) return 0.0;
    return std::sqrt(channel_dispersion(x) / static_cast<double>(fbl.n)) *
           q_inverse(fbl.eps_bar);
}

double bonus_b(const FblParams& fbl) {
    return std::log2(static_cast<double>(fbl.n)) / (2.0 * static_cast<double>(fbl.n));
}

RateValue fbr_rate(double omega, const FblParams& fbl) {
    if (std::isnan(omega) || omega < 0.0)
        throw std::domain_error("fbr_rate: omega must be >= 0");
    if (std::isinf(omega)) return {std::numeric_limits<double>::infinity()};
    return {std::log2(1.0 + omega) - penalty_a(omega, fbl) + bonus_b(fbl)};
}

double sinr_threshold(RateValue rt, const FblParams& fbl, double x) {
    const double e = rt.bits_per_channel_use + penalty_a(x, fbl) - bonus_b(fbl);
    const double theta = std::exp2(e) - 1.0;
    return theta > 0.0 ? theta : 0.0;
}

}  // namespace fblnet
