#include "fblnet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fblnet/numerics.hpp"
#include "intensity_detail.hpp"

namespace fblnet {

namespace {

using detail::kAlphaFullInversion;
using detail::kPi;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double interference_intensity(double w, const NetworkParams& p) {
    if (!(w > 0.0)) throw std::domain_error("interference_intensity: w must be > 0");
    const double pref = 2.0 * std::pow(p.rho_o, 2.0 / p.eta) /
                        (p.eta * std::pow(w, 1.0 - 2.0 / p.eta));
    if (p.alpha >= kAlphaFullInversion) {
        // gamma factor degenerates to a unit step at w = 1/rho_o
        return w > 1.0 / p.rho_o ? pref : 0.0;
    }
    const double q = 2.0 / (p.eta * (1.0 - p.alpha));
    const double arg = kPi * p.lambda_bs * std::pow(p.rho_o * w, q);
    return pref * std::pow(kPi * p.lambda_bs, 1.0 - p.alpha) *
           lower_incomplete_gamma(1.0 + p.alpha, arg);
}

double laplace_interference(double s, double r0, const NetworkParams& p) {
    if (std::isnan(s) || s < 0.0)
        throw std::domain_error("laplace_interference: s must be >= 0");
    if (r0 < 0.0) throw std::domain_error("laplace_interference: r0 must be >= 0");
    if (s == 0.0 || p.delta == 0.0) return 1.0;
    const double delta = p.delta;
    std::function<double(double)> payload = [s, delta](double w) {
        return delta * s / (w + s);
    };
    const double expo = detail::integrate_against_intensity<double>(
        p, detail::w_min_for(r0, p), s, payload, detail::kInnerSpec);
    if (expo > 745.0) return 0.0;
    return std::exp(-expo);
}

double sinr_cdf(double theta, const NetworkParams& p) {
    if (std::isnan(theta) || theta < 0.0)
        throw std::domain_error("sinr_cdf: theta must be >= 0");
    if (theta == 0.0) return 0.0;
    if (std::isinf(theta)) return 1.0;

    if (p.alpha >= kAlphaFullInversion) {
        // full inversion: the conditional law no longer depends on r0
        const double s = theta / p.rho_o;
        const double succ =
            std::exp(-theta * p.noise / p.rho_o) * laplace_interference(s, 1.0, p);
        return std::clamp(1.0 - succ, 0.0, 1.0);
    }

    const double kp = kPi * p.lambda_bs;
    const double expo_r = p.eta * (1.0 - p.alpha) / 2.0;
    auto integrand = [&](double u) {
        if (u <= 0.0) return std::exp(-u);
        const double r0 = std::sqrt(u / kp);
        const double c = std::pow(u / kp, expo_r);  // r0^{eta(1-alpha)}
        const double s = theta * c / p.rho_o;
        const double noise_expo = theta * c * p.noise / p.rho_o;
        if (noise_expo > 745.0) return 0.0;
        return std::exp(-u - noise_expo) * laplace_interference(s, r0, p);
    };
    const double succ = integrate_semi_infinite(
        std::function<double(double)>(integrand), 0.0, detail::kOuterSpec);
    return std::clamp(1.0 - succ, 0.0, 1.0);
}

namespace {

// memoizing view of sinr_cdf for the split-point searches; local to a
// single optimization, so no synchronization is needed
class CdfCache {
public:
    explicit CdfCache(const NetworkParams& p) : p_(p) {}
    double operator()(double theta) {
        if (std::isinf(theta)) return 1.0;
        auto it = memo_.find(theta);
        if (it != memo_.end()) return it->second;
        const double v = sinr_cdf(theta, p_);
        memo_.emplace(theta, v);
        return v;
    }

private:
    const NetworkParams& p_;
    std::map<double, double> memo_;
};

double upper_given(RateValue rt, double upsilon, const FblParams& fbl,
                   CdfCache& cdf) {
    const double th_inf = sinr_threshold(rt, fbl, kInf);
    if (std::isinf(upsilon)) return cdf(th_inf);
    const double th_ups = sinr_threshold(rt, fbl, upsilon);
    const double v = cdf(std::max(upsilon, th_inf)) +
                     cdf(std::min(upsilon, th_ups)) - cdf(upsilon);
    return std::clamp(v, 0.0, 1.0);
}

double lower_given(RateValue rt, double lam, const FblParams& fbl,
                   CdfCache& cdf) {
    const double th_zero = sinr_threshold(rt, fbl, 0.0);
    const double th_lam = sinr_threshold(rt, fbl, lam);
    const double v = cdf(std::min(lam, th_zero)) - cdf(lam) +
                     cdf(std::max(lam, th_lam));
    return std::clamp(v, 0.0, 1.0);
}

}  // namespace

double outage_upper(RateValue rt, double upsilon, const FblParams& fbl,
                    const NetworkParams& params) {
    if (!(upsilon > 0.0))
        throw std::domain_error("outage_upper: upsilon must be > 0");
    CdfCache cdf(params);
    return upper_given(rt, upsilon, fbl, cdf);
}

double outage_lower(RateValue rt, double lam, const FblParams& fbl,
                    const NetworkParams& params) {
    if (!(lam > 0.0)) throw std::domain_error("outage_lower: lam must be > 0");
    CdfCache cdf(params);
    return lower_given(rt, lam, fbl, cdf);
}

OutageBounds outage_bounds_opt(RateValue rt, const FblParams& fbl,
                               const NetworkParams& params) {
    if (rt.bits_per_channel_use < 0.0)
        throw std::domain_error("outage_bounds_opt: rate must be >= 0");
    CdfCache cdf(params);
    OutageBounds out;
    const double th_inf = sinr_threshold(rt, fbl, kInf);
    const double th_zero = sinr_threshold(rt, fbl, 0.0);
    const double th_ar = std::exp2(rt.bits_per_channel_use) - 1.0;
    out.simplified_upper = cdf(th_inf);
    out.simplified_lower = cdf(th_zero);

    // split-point search on a log axis spanning the AR and FBR thresholds
    const double lo = std::max(th_ar / 10.0, 1e-12);
    const double hi = std::max({100.0 * th_inf, 100.0 * th_ar, 1e3 * lo});
    const double ylo = std::log(lo), yhi = std::log(hi);
    const double ytol = 1e-3;

    auto up_obj = [&](double y) { return upper_given(rt, std::exp(y), fbl, cdf); };
    const MinimizeResult up = minimize_scalar(up_obj, ylo, yhi, ytol, 64);
    if (up.min < out.simplified_upper) {
        out.upper = up.min;
        out.upsilon_opt = std::exp(up.argmin);
    } else {
        out.upper = out.simplified_upper;
        out.upsilon_opt = kInf;
    }

    auto low_obj = [&](double y) {
        return -lower_given(rt, std::exp(y), fbl, cdf);
    };
    const MinimizeResult low = minimize_scalar(low_obj, ylo, yhi, ytol, 64);
    if (-low.min > out.simplified_lower) {
        out.lower = -low.min;
        out.lambda_opt = std::exp(low.argmin);
    } else {
        out.lower = out.simplified_lower;
        out.lambda_opt = 0.0;
    }
    return out;
}

double ar_outage(RateValue rt, const NetworkParams& params) {
    if (rt.bits_per_channel_use < 0.0)
        throw std::domain_error("ar_outage: rate must be >= 0");
    return sinr_cdf(std::exp2(rt.bits_per_channel_use) - 1.0, params);
}

}  // namespace fblnet
