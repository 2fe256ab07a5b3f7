#pragma once

// Internal helpers shared by the closed-form modules (analysis, meta).

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "fblnet/analysis.hpp"
#include "fblnet/network.hpp"
#include "fblnet/numerics.hpp"

namespace fblnet::detail {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kAlphaFullInversion = 1.0 - 1e-9;

// quadrature settings for the nested geometry integrals; the inner
// (interference) axis runs tighter than the outer r0 average
inline const QuadratureSpec kInnerSpec{1e-9, 1e-13, 4000};
inline const QuadratureSpec kOuterSpec{1e-7, 1e-11, 4000};

inline double w_min_for(double r0, const NetworkParams& p) {
    if (p.alpha >= kAlphaFullInversion) return 1.0 / p.rho_o;
    return std::pow(r0, p.eta * (1.0 - p.alpha)) / p.rho_o;
}

// scale where the incomplete-gamma argument reaches 1+alpha
inline double gamma_knee(const NetworkParams& p) {
    if (p.alpha >= kAlphaFullInversion) return 1.0 / p.rho_o;
    const double q = 2.0 / (p.eta * (1.0 - p.alpha));
    return std::pow((1.0 + p.alpha) / (kPi * p.lambda_bs), 1.0 / q) / p.rho_o;
}

// ∫ λ(w)·payload(w) dw over [w_min,∞), integrated in y = ln w with
// breakpoints at the payload knee and the intensity knee. w spans many
// orders of magnitude under SI units, hence the log axis.
template <typename T>
T integrate_against_intensity(const NetworkParams& p, double w_min, double knee,
                              const std::function<T(double)>& payload,
                              const QuadratureSpec& spec) {
    if (p.alpha >= kAlphaFullInversion) w_min = std::max(w_min, 1.0 / p.rho_o);
    std::function<T(double)> fy = [&p, &payload](double y) -> T {
        const double w = std::exp(y);
        const double lw = interference_intensity(w, p);
        if (lw == 0.0) return T{};
        return (lw * w) * payload(w);
    };
    T total{};
    if (w_min <= 0.0) {
        // r0 = 0 edge: integrate the leading stretch on the linear axis
        const double w_a = std::min(knee, gamma_knee(p)) * 1e-6;
        std::function<T(double)> g = [&p, &payload](double w) -> T {
            if (w <= 0.0) return T{};
            return interference_intensity(w, p) * payload(w);
        };
        if constexpr (std::is_same_v<T, double>)
            total += integrate(g, 0.0, w_a, spec);
        else
            total += integrate_complex(g, 0.0, w_a, spec);
        w_min = w_a;
    }
    std::vector<double> bp{std::log(w_min)};
    for (double k : {knee, gamma_knee(p)}) {
        if (k > w_min) bp.push_back(std::log(k));
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        if constexpr (std::is_same_v<T, double>)
            total += integrate(fy, bp[i], bp[i + 1], spec);
        else
            total += integrate_complex(fy, bp[i], bp[i + 1], spec);
    }
    if constexpr (std::is_same_v<T, double>)
        total += integrate_semi_infinite(fy, bp.back(), spec);
    else
        total += integrate_semi_infinite_complex(fy, bp.back(), spec);
    return total;
}

}  // namespace fblnet::detail
