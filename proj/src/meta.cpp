#include "fblnet/meta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "intensity_detail.hpp"

namespace fblnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// exp(z)-1 with small-|z| care; std::expm1 has no complex overload
Complex cexpm1(Complex z) {
    if (std::abs(z) < 1e-4) return z * (1.0 + z * 0.5 * (1.0 + z / 3.0));
    return std::exp(z) - 1.0;
}

// E[(δ·w/(w+s) + 1-δ)^b] machinery: the per-interferer factor on the
// mapped w axis, raised to a possibly complex order
Complex one_minus_base_pow(double w, double s, double delta, Complex b) {
    const double log_base = std::log1p(-delta * s / (w + s));
    return -cexpm1(b * log_base);
}

}  // namespace

std::string to_string(MetaMethod m) {
    switch (m) {
        case MetaMethod::beta_approx: return "beta_approx";
        case MetaMethod::gil_pelaez: return "gil_pelaez";
        case MetaMethod::mc_exact: return "mc_exact";
        case MetaMethod::mc_lower_bound: return "mc_lower_bound";
    }
    return "unknown";
}

double success_prob_lb(const NetworkRealization& real, std::size_t tagged_index,
                       double theta, const NetworkParams& params) {
    if (tagged_index >= real.bs_positions.size() || !real.has_ue[tagged_index])
        throw std::out_of_range("success_prob_lb: tagged index has no serving link");
    if (std::isnan(theta) || theta < 0.0)
        throw std::domain_error("success_prob_lb: theta must be >= 0");
    if (theta == 0.0) return 1.0;

    const double r0 = real.serving_distance[tagged_index];
    const double c = std::pow(r0, params.eta * (1.0 - params.alpha)) / params.rho_o;
    const Vec2 bs = real.bs_positions[tagged_index];
    double value = std::exp(-theta * params.noise * c);
    for (std::size_t j = 0; j < real.bs_positions.size(); ++j) {
        if (j == tagged_index || !real.has_ue[j]) continue;
        const double dx = real.ue_positions[j].x - bs.x;
        const double dy = real.ue_positions[j].y - bs.y;
        const double u2 = dx * dx + dy * dy;
        const double power = params.rho_o *
                             std::pow(real.serving_distance[j], params.alpha * params.eta);
        const double gain = power * std::pow(u2, -params.eta / 2.0);
        value *= params.delta / (1.0 + theta * gain * c) + (1.0 - params.delta);
    }
    return value;
}

Complex threshold_moment(Complex b, double theta, const NetworkParams& p) {
    if (b.real() < 0.0)
        throw std::domain_error("threshold_moment: Re(b) must be >= 0");
    if (std::isnan(theta) || theta < 0.0)
        throw std::domain_error("threshold_moment: theta must be >= 0");
    if (theta == 0.0 || b == Complex{}) return 1.0;

    const double delta = p.delta;
    if (p.alpha >= detail::kAlphaFullInversion) {
        // full inversion: conditional success is independent of r0
        const double s = theta / p.rho_o;
        Complex expo = b * (theta * p.noise / p.rho_o);
        if (delta > 0.0) {
            std::function<Complex(double)> payload = [s, delta, b](double w) {
                return one_minus_base_pow(w, s, delta, b);
            };
            expo += detail::integrate_against_intensity<Complex>(
                p, 1.0 / p.rho_o, s, payload, detail::kInnerSpec);
        }
        return std::exp(-expo);
    }

    const double kp = detail::kPi * p.lambda_bs;
    const double expo_r = p.eta * (1.0 - p.alpha) / 2.0;
    auto integrand = [&](double u) -> Complex {
        if (u <= 0.0) return std::exp(-u);
        const double c = std::pow(u / kp, expo_r);  // r0^{eta(1-alpha)}
        const double s = theta * c / p.rho_o;
        Complex expo = Complex(u) + b * (theta * c * p.noise / p.rho_o);
        if (delta > 0.0) {
            std::function<Complex(double)> payload = [s, delta, b](double w) {
                return one_minus_base_pow(w, s, delta, b);
            };
            expo += detail::integrate_against_intensity<Complex>(
                p, c / p.rho_o, s, payload, detail::kInnerSpec);
        }
        if (expo.real() > 745.0) return Complex{};
        return std::exp(-expo);
    };
    return integrate_semi_infinite_complex(
        std::function<Complex(double)>(integrand), 0.0, detail::kOuterSpec);
}

MomentPair threshold_moment_pair(double theta, const NetworkParams& params) {
    MomentPair m;
    m.m1 = threshold_moment(Complex{1.0, 0.0}, theta, params).real();
    m.m2 = threshold_moment(Complex{2.0, 0.0}, theta, params).real();
    return m;
}

Complex moment_hat(Complex b, RateValue rt, const FblParams& fbl,
                   const NetworkParams& params) {
    return threshold_moment(b, sinr_threshold(rt, fbl, kInf), params);
}

std::pair<double, double> beta_fit(const MomentPair& m) {
    if (!(m.m1 > 0.0 && m.m1 <= 1.0) || !(m.m2 > 0.0 && m.m2 <= 1.0))
        throw std::domain_error("beta_fit: moments must be in (0,1]");
    const double var = m.m2 - m.m1 * m.m1;
    if (var <= 1e-14)
        throw degeneracy_error("beta_fit: zero-variance moment pair");
    const double zeta = (m.m1 - m.m2) * (1.0 - m.m1) / var;
    const double shape1 = m.m1 * (m.m1 - m.m2) / var;
    if (!(shape1 > 0.0) || !(zeta > 0.0))
        throw degeneracy_error("beta_fit: moments outside the Beta family");
    return {shape1, zeta};
}

double meta_beta_from_moments(double p_th, const MomentPair& m) {
    if (!(p_th > 0.0 && p_th < 1.0))
        throw std::domain_error("meta_beta: p_th must be in (0,1)");
    try {
        const auto [s1, s2] = beta_fit(m);
        return 1.0 - reg_incomplete_beta(p_th, s1, s2);
    } catch (const degeneracy_error&) {
        return p_th < m.m1 ? 1.0 : 0.0;  // point mass at m1
    }
}

double meta_beta(double p_th, RateValue rt, const FblParams& fbl,
                 const NetworkParams& params) {
    const double theta = sinr_threshold(rt, fbl, kInf);
    return meta_beta_from_moments(p_th, threshold_moment_pair(theta, params));
}

double meta_gil_pelaez(double p_th, RateValue rt, const FblParams& fbl,
                       const NetworkParams& params) {
    const double theta = sinr_threshold(rt, fbl, kInf);
    if (theta == 0.0) return p_th < 1.0 ? 1.0 : 0.0;
    auto moment_fn = [theta, &params](double t) {
        return threshold_moment(Complex{0.0, t}, theta, params);
    };
    return gil_pelaez_invert(moment_fn, p_th, QuadratureSpec{1e-5, 1e-6, 400});
}

double ar_meta(double p_th, RateValue rt, const NetworkParams& params) {
    const double theta = std::exp2(rt.bits_per_channel_use) - 1.0;
    if (theta <= 0.0) return p_th < 1.0 ? 1.0 : 0.0;
    return meta_beta_from_moments(p_th, threshold_moment_pair(theta, params));
}

}  // namespace fblnet
