#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace fblnet {

using Complex = std::complex<double>;

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
};

/// Thrown when an adaptive rule stops before reaching the requested
/// tolerance. Carries the best estimate so callers can decide whether
/// to keep it.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& what, double best, double err)
        : std::runtime_error(what), best_(best), err_(err) {}
    double best_estimate() const noexcept { return best_; }
    double error_estimate() const noexcept { return err_; }

private:
    double best_;
    double err_;
};

/// Lower incomplete gamma γ(a,x), unregularized: γ(a,∞) = Γ(a).
/// Series for x < a+1, continued fraction otherwise.
double lower_incomplete_gamma(double a, double x);

/// Regularized incomplete beta I_z(x,y).
double reg_incomplete_beta(double z, double x, double y);

/// log Γ(z) for Re(z) > 0, principal branch (Lanczos).
Complex complex_log_gamma(Complex z);

// Globally adaptive Gauss-Kronrod 7-15 on a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});
Complex integrate_complex(const std::function<Complex(double)>& f, double a,
                          double b, const QuadratureSpec& spec = {});

// [a,∞) via the rational map t = a + u/(1-u); integrand needs eventual decay.
double integrate_semi_infinite(const std::function<double(double)>& f,
                               double a, const QuadratureSpec& spec = {});
Complex integrate_semi_infinite_complex(const std::function<Complex(double)>& f,
                                        double a, const QuadratureSpec& spec = {});

/// CCDF at p_th of a (0,1]-valued random variable from its imaginary-order
/// moments: 1/2 + (1/π)∫ Im(e^{-jt·ln p_th} M_jt)/t dt, clamped to [0,1].
/// The head (0,1] is integrated adaptively; the tail is summed over
/// half-period panels until contributions fall below tolerance.
double gil_pelaez_invert(const std::function<Complex(double)>& moment_fn,
                         double p_th, const QuadratureSpec& spec = {1e-6, 1e-8, 2000});

struct MinimizeResult {
    double argmin;
    double min;
};

/// Coarse-grid bracketing followed by golden-section refinement.
/// Never returns a value worse than the best grid sample; flat
/// functions resolve to the leftmost minimum.
MinimizeResult minimize_scalar(const std::function<double(double)>& g,
                               double lo, double hi, double tol,
                               int grid_points = 64);

}  // namespace fblnet
