#include "fblnet/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace fblnet {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gauss-Kronrod 7-15 nodes/weights on [-1,1] (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Panel {
    double a, b;
    T value;
    double error;
};

template <typename T>
Panel<T> gk15(const std::function<T(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T res_k = kWgk[7] * fc;
    T res_g = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const T f1 = f(c - dx);
        const T f2 = f(c + dx);
        res_k += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) res_g += kWg[j / 2] * (f1 + f2);
    }
    res_k *= h;
    res_g *= h;
    return {a, b, res_k, std::abs(res_k - res_g)};
}

template <typename T>
T adaptive(const std::function<T(double)>& f, double a, double b,
           const QuadratureSpec& spec) {
    if (!(spec.rel_tol > 0) || !(spec.abs_tol > 0) || spec.max_subdivisions < 1)
        throw std::domain_error("integrate: invalid quadrature spec");
    if (a == b) return T{};

    auto worse = [](const Panel<T>& x, const Panel<T>& y) {
        return x.error < y.error;
    };
    std::priority_queue<Panel<T>, std::vector<Panel<T>>, decltype(worse)> q(worse);
    Panel<T> root = gk15(f, a, b);
    T total = root.value;
    double total_err = root.error;
    q.push(std::move(root));

    int splits = 0;
    while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (q.empty()) break;
        if (++splits > spec.max_subdivisions) {
            double best = 0.0;
            if constexpr (std::is_same_v<T, double>) best = total;
            throw accuracy_error("integrate: subdivision limit reached", best,
                                 total_err);
        }
        Panel<T> worst = q.top();
        q.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval exhausted at machine precision; accept its estimate
            total_err -= worst.error;
            continue;
        }
        Panel<T> left = gk15(f, worst.a, mid);
        Panel<T> right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        q.push(std::move(left));
        q.push(std::move(right));
    }
    return total;
}

template <typename T>
T semi_infinite(const std::function<T(double)>& f, double a,
                const QuadratureSpec& spec) {
    // t = a + u/(1-u); du weight 1/(1-u)^2. GK nodes stay inside (0,1).
    auto g = [&f, a](double u) -> T {
        const double om = 1.0 - u;
        const double t = a + u / om;
        if (!std::isfinite(t)) return T{};
        const T v = f(t);
        return v / (om * om);
    };
    return adaptive<T>(g, 0.0, 1.0, spec);
}

}  // namespace

double lower_incomplete_gamma(double a, double x) {
    if (!(a > 0)) throw std::domain_error("lower_incomplete_gamma: a must be > 0");
    if (std::isnan(x) || x < 0)
        throw std::domain_error("lower_incomplete_gamma: x must be >= 0");
    if (x == 0) return 0.0;
    const double ga = std::tgamma(a);
    if (std::isinf(x) || x > 700.0 + 2 * a) return ga;

    if (x < a + 1.0) {
        // series for P(a,x)
        double ap = a;
        double term = 1.0 / a;
        double sum = term;
        for (int it = 0; it < 500; ++it) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
        }
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a)) * ga;
    }
    // continued fraction for Q(a,x)
    const double fpmin = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    const double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    return ga * (1.0 - q);
}

namespace {

// continued fraction for the incomplete beta (Numerical Recipes form)
double betacf(double a, double b, double x) {
    const double fpmin = std::numeric_limits<double>::min() / 1e-30;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h;
}

}  // namespace

double reg_incomplete_beta(double z, double x, double y) {
    if (!(x > 0) || !(y > 0))
        throw std::domain_error("reg_incomplete_beta: shapes must be > 0");
    if (std::isnan(z) || z < 0.0 || z > 1.0)
        throw std::domain_error("reg_incomplete_beta: z must be in [0,1]");
    if (z == 0.0) return 0.0;
    if (z == 1.0) return 1.0;
    const double lbeta =
        std::lgamma(x + y) - std::lgamma(x) - std::lgamma(y);
    const double bt = std::exp(lbeta + x * std::log(z) + y * std::log1p(-z));
    if (z < (x + 1.0) / (x + y + 2.0)) return bt * betacf(x, y, z) / x;
    return 1.0 - bt * betacf(y, x, 1.0 - z) / y;
}

Complex complex_log_gamma(Complex z) {
    // Lanczos, g = 7, 9 terms; shift left of Re(z) = 0.5 by recurrence.
    static const double kCoef[9] = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) {
        if (z == 0.0) throw std::domain_error("complex_log_gamma: pole at 0");
        return complex_log_gamma(z + 1.0) - std::log(z);
    }
    const Complex zm = z - 1.0;
    Complex series = kCoef[0];
    for (int i = 1; i < 9; ++i) series += kCoef[i] / (zm + static_cast<double>(i));
    const Complex t = zm + 7.5;
    return 0.5 * std::log(2.0 * kPi) + (zm + 0.5) * std::log(t) - t +
           std::log(series);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    return adaptive<double>(f, a, b, spec);
}

Complex integrate_complex(const std::function<Complex(double)>& f, double a,
                          double b, const QuadratureSpec& spec) {
    return adaptive<Complex>(f, a, b, spec);
}

double integrate_semi_infinite(const std::function<double(double)>& f, double a,
                               const QuadratureSpec& spec) {
    return semi_infinite<double>(f, a, spec);
}

Complex integrate_semi_infinite_complex(const std::function<Complex(double)>& f,
                                        double a, const QuadratureSpec& spec) {
    return semi_infinite<Complex>(f, a, spec);
}

namespace {

// binomially weighted average of the most recent partial sums; damps the
// oscillation of slowly converging alternating tails
double euler_average(const std::vector<double>& partials) {
    const std::size_t take = std::min<std::size_t>(partials.size(), 12);
    std::vector<double> a(partials.end() - take, partials.end());
    while (a.size() > 1) {
        for (std::size_t i = 0; i + 1 < a.size(); ++i) a[i] = 0.5 * (a[i] + a[i + 1]);
        a.pop_back();
    }
    return a.front();
}

}  // namespace

double gil_pelaez_invert(const std::function<Complex(double)>& moment_fn,
                         double p_th, const QuadratureSpec& spec) {
    if (!(p_th > 0.0 && p_th < 1.0))
        throw std::domain_error("gil_pelaez_invert: p_th must be in (0,1)");
    const double lnp = std::log(p_th);
    auto integrand = [&moment_fn, lnp](double t) {
        const Complex m = moment_fn(t);
        const Complex rot = std::exp(Complex(0.0, -t * lnp));
        return (rot * m).imag() / t;
    };

    // head: finite limit at t -> 0+, nodes never touch 0
    const double head = integrate(integrand, 0.0, 1.0, spec);

    // tail: panels of half an oscillation period, summed with iterated
    // averaging of the partial sums until the estimate settles. The local
    // phase-drift rate at the tail start sizes the panels so that
    // consecutive panel sums alternate.
    const double dt = 1e-2;
    const Complex z1 = std::exp(Complex(0.0, -lnp)) * moment_fn(1.0);
    const Complex z2 =
        std::exp(Complex(0.0, -(1.0 + dt) * lnp)) * moment_fn(1.0 + dt);
    double omega = std::fabs(std::arg(z2 * std::conj(z1))) / dt;
    if (!std::isfinite(omega) || omega < 1e-6) omega = std::fabs(lnp);
    const double h = kPi / std::clamp(omega, 1e-3, 1e3);
    QuadratureSpec panel_spec = spec;
    panel_spec.abs_tol = std::max(spec.abs_tol * 1e-2, 1e-300);
    double t0 = 1.0;
    double running = head;
    std::vector<double> partials;
    double est = head;
    double prev_est = std::numeric_limits<double>::quiet_NaN();
    int quiet = 0;
    const int max_panels = std::max(64, spec.max_subdivisions);
    int k = 0;
    for (; k < max_panels; ++k) {
        const double t1 = t0 + h;
        running += integrate(integrand, t0, t1, panel_spec);
        t0 = t1;
        partials.push_back(running);
        prev_est = est;
        est = euler_average(partials);
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(est));
        quiet = (k >= 3 && std::fabs(est - prev_est) <= tol) ? quiet + 1 : 0;
        if (quiet >= 3) break;
    }
    const double value = std::clamp(0.5 + est / kPi, 0.0, 1.0);
    if (k >= max_panels)
        throw accuracy_error("gil_pelaez_invert: oscillatory tail did not settle",
                             value, std::fabs(est - prev_est));
    return value;
}

MinimizeResult minimize_scalar(const std::function<double(double)>& g,
                               double lo, double hi, double tol,
                               int grid_points) {
    if (!(lo < hi)) throw std::domain_error("minimize_scalar: need lo < hi");
    const int n = std::max(grid_points, 2);

    double best_x = lo;
    double best_f = std::numeric_limits<double>::infinity();
    std::vector<double> xs(n), fs(n);
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        const double fx = g(x);
        xs[i] = x;
        fs[i] = fx;
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    int ibest = 0;
    for (int i = 0; i < n; ++i)
        if (fs[i] == best_f) {
            ibest = i;
            break;
        }

    // golden-section refinement inside the bracketing neighbours
    double a = xs[std::max(ibest - 1, 0)];
    double b = xs[std::min(ibest + 1, n - 1)];
    const double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = g(x2);
        }
    }
    if (f1 < best_f) {
        best_f = f1;
        best_x = x1;
    }
    if (f2 < best_f) {
        best_f = f2;
        best_x = x2;
    }
    return {best_x, best_f};
}

}  // namespace fblnet
