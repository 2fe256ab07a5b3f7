#include "fblnet/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "fblnet/analysis.hpp"
#include "fblnet/meta.hpp"
#include "fblnet/numerics.hpp"
#include "fblnet/simulator.hpp"

namespace fblnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

NetworkParams section_iv_params(double alpha, double delta) {
    return params_from_config(2.0, -60.0, -90.0, 4.0, alpha, delta);
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i)
        g[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    return g;
}

// --- 1. analytic bounds bracket the simulated outage -----------------------

CriterionResult criterion_bracketing(const AcceptanceOptions& opt) {
    CriterionResult res{1, "bracketing: optimized bounds vs MC outage (2 sigma)"};
    const NetworkParams np = section_iv_params(0.5, 0.7);
    const FblParams fbl(128, 1e-2);
    SimConfig sim;
    sim.seed = opt.seed;
    sim.outage_iterations = 10000;
    sim.threads = opt.threads;

    res.pass = true;
    double worst = kInf;  // most negative slack observed
    double worst_rt = 0.0;
    for (double rt : linspace(0.25, 4.0, 15)) {
        const OutageBounds b = outage_bounds_opt({rt}, fbl, np);
        const EstimateResult mc = estimate_outage({rt}, fbl, np, sim);
        const double margin = 2.0 * mc.std_error;
        const double slack =
            std::min(mc.value - (b.lower - margin), (b.upper + margin) - mc.value);
        if (slack < worst) {
            worst = slack;
            worst_rt = rt;
        }
        if (slack < 0.0) res.pass = false;
    }
    res.detail = "min slack " + fmt(worst) + " at R_t=" + fmt(worst_rt);
    return res;
}

// --- 2. FBR-AR ordering and gap widening with shorter blocks ---------------

CriterionResult criterion_ordering(const AcceptanceOptions&) {
    CriterionResult res{2, "FBR above AR; gap widens as blocklength shrinks"};
    const NetworkParams np = section_iv_params(0.5, 0.7);
    res.pass = true;
    double min_gap_diff = kInf;
    for (double rt : linspace(0.25, 4.0, 15)) {
        const double ar = ar_outage({rt}, np);
        double gap[2][2];  // [n-index][eps-index]
        const long ns[2] = {128, 2048};
        const double eps[2] = {1e-2, 1e-5};
        for (int i = 0; i < 2; ++i) {
            double su[2];
            for (int j = 0; j < 2; ++j) {
                const FblParams fbl(ns[i], eps[j]);
                su[j] = sinr_cdf(sinr_threshold({rt}, fbl, kInf), np);
                gap[i][j] = su[j] - ar;
            }
            // stricter target FER costs more rate, hence more outage
            if (!(su[1] >= su[0] - 1e-9) || !(su[0] >= ar - 1e-9)) res.pass = false;
        }
        for (int j = 0; j < 2; ++j) {
            min_gap_diff = std::min(min_gap_diff, gap[0][j] - gap[1][j]);
            if (!(gap[0][j] > gap[1][j])) res.pass = false;
        }
    }
    res.detail = "min (gap_128 - gap_2048) = " + fmt(min_gap_diff);
    return res;
}

// --- 3. simplified bounds collapse onto AR as n grows ----------------------

CriterionResult criterion_asymptotic(const AcceptanceOptions&) {
    CriterionResult res{3, "asymptotic convergence of simplified bounds at n=1e6"};
    const NetworkParams np = section_iv_params(0.5, 0.7);
    const FblParams fbl(1000000, 1e-2);
    double worst_up = 0.0, worst_low = 0.0;
    for (double rt : linspace(0.25, 4.0, 15)) {
        const double ar = ar_outage({rt}, np);
        const double su = sinr_cdf(sinr_threshold({rt}, fbl, kInf), np);
        const double sl = sinr_cdf(sinr_threshold({rt}, fbl, 0.0), np);
        worst_up = std::max(worst_up, std::fabs(su - ar));
        worst_low = std::max(worst_low, std::fabs(sl - ar));
    }
    res.pass = worst_up <= 0.02 && worst_low <= 0.005;
    res.detail = "max |upper-ar| = " + fmt(worst_up) +
                 ", max |lower-ar| = " + fmt(worst_low);
    return res;
}

// --- 4. Laplace transform of interference vs conditioned MC ----------------

CriterionResult criterion_laplace(const AcceptanceOptions& opt) {
    CriterionResult res{4, "interference Laplace transform vs MC (3%)"};
    const NetworkParams np = section_iv_params(0.5, 0.7);
    SimConfig sim;
    sim.seed = opt.seed;
    sim.laplace_min_samples = 100000;
    sim.threads = opt.threads;

    const double pairs[5][2] = {  // (r0 meters, theta)
        {200.0, 1.0}, {300.0, 0.5}, {300.0, 1.0}, {300.0, 2.0}, {400.0, 1.0}};
    res.pass = true;
    double worst = 0.0;
    for (const auto& pr : pairs) {
        const double r0 = pr[0], theta = pr[1];
        const double s =
            theta * std::pow(r0, np.eta * (1.0 - np.alpha)) / np.rho_o;
        const double analytic = laplace_interference(s, r0, np);
        const EstimateResult mc =
            estimate_laplace(s, {r0 - 10.0, r0 + 10.0}, np, sim);
        const double rel = std::fabs(analytic - mc.value) / analytic;
        worst = std::max(worst, rel);
        if (rel > 0.03) res.pass = false;
    }
    res.detail = "max relative gap " + fmt(worst);
    return res;
}

// --- 5. SINR distribution cross-check ---------------------------------------

CriterionResult criterion_sinr_cdf(const AcceptanceOptions& opt) {
    CriterionResult res{5, "SINR CDF sup-norm vs empirical (0.01)"};
    res.pass = true;
    std::string detail;
    for (double alpha : {0.5, 1.0}) {
        const NetworkParams np = section_iv_params(alpha, 0.7);
        SimConfig sim;
        sim.seed = opt.seed;
        sim.threads = opt.threads;
        std::vector<double> samples = sample_sinr_batch(np, sim, 100000);
        std::sort(samples.begin(), samples.end());
        const std::size_t n = samples.size();
        double sup = 0.0;
        // compare at sample quantiles, where the empirical CDF is exact
        for (int k = 1; k <= 400; ++k) {
            const std::size_t idx =
                static_cast<std::size_t>((n - 1) * (k / 401.0));
            const double theta = samples[idx];
            if (!(theta > 0.0) || std::isinf(theta)) continue;
            const double emp = static_cast<double>(idx + 1) / n;
            const double ana = sinr_cdf(theta, np);
            sup = std::max(sup, std::fabs(emp - ana));
        }
        if (sup > 0.01) res.pass = false;
        if (!detail.empty()) detail += ", ";
        detail += "alpha=" + fmt(alpha) + ": D=" + fmt(sup);
    }
    res.detail = detail;
    return res;
}

// --- 6. meta-distribution pipeline ------------------------------------------

CriterionResult criterion_meta(const AcceptanceOptions& opt) {
    CriterionResult res{6, "meta pipeline: beta approx vs MC, AR gap"};
    const NetworkParams np = section_iv_params(1.0, 0.7);
    const FblParams fbl(128, 1e-5);
    const std::vector<double> rt_list = {0.5, 1.2, 1.5};
    const std::vector<double> p_grid = linspace(0.05, 0.95, 19);
    SimConfig sim;
    sim.seed = opt.seed;
    sim.meta_samples_per_ue = 20000;
    sim.threads = opt.threads;

    const auto mc = estimate_meta_multi(rt_list, fbl, np, sim, p_grid);
    res.pass = true;
    double worst_beta = 0.0, min_gap = kInf;
    for (std::size_t k = 0; k < rt_list.size(); ++k) {
        const double theta_fbr = sinr_threshold({rt_list[k]}, fbl, kInf);
        const double theta_ar = std::exp2(rt_list[k]) - 1.0;
        const MomentPair m_fbr = threshold_moment_pair(theta_fbr, np);
        const MomentPair m_ar = threshold_moment_pair(theta_ar, np);
        for (std::size_t i = 0; i < p_grid.size(); ++i) {
            const double beta = meta_beta_from_moments(p_grid[i], m_fbr);
            const double ar = meta_beta_from_moments(p_grid[i], m_ar);
            const double lb = mc[k].lower_bound.values[i];
            const double exact = mc[k].exact.values[i];
            worst_beta = std::max(worst_beta, std::fabs(beta - lb));
            if (std::fabs(beta - lb) > 0.03) res.pass = false;     // (a)
            if (exact < lb) res.pass = false;                       // (b)
            if (ar < beta - 1e-9) res.pass = false;                 // (c) ordering
            if (p_grid[i] == 0.5) min_gap = std::min(min_gap, ar - beta);
        }
    }
    if (!(min_gap >= 0.05)) res.pass = false;                       // (c) gap
    res.detail = "max |beta - mc_lb| = " + fmt(worst_beta) +
                 ", min AR gap at p=0.5: " + fmt(min_gap);
    return res;
}

// --- 7. Gil-Pelaez inversion against closed-form Beta CCDF ------------------

CriterionResult criterion_gil_pelaez(const AcceptanceOptions&) {
    CriterionResult res{7, "Gil-Pelaez vs Beta CCDF (1e-3)"};
    const double shapes[5][2] = {
        {2.0, 2.0}, {0.8, 3.5}, {4.2, 1.3}, {2.7, 0.9}, {1.5, 5.0}};
    res.pass = true;
    double worst = 0.0;
    for (const auto& sh : shapes) {
        const double a = sh[0], b = sh[1];
        auto moments = [a, b](double t) {
            const Complex jt(0.0, t);
            return std::exp(complex_log_gamma(a + jt) - complex_log_gamma(a) +
                            complex_log_gamma(a + b) - complex_log_gamma(a + b + jt));
        };
        for (int k = 1; k <= 9; ++k) {
            const double p = 0.1 * k;
            const double gp =
                gil_pelaez_invert(moments, p, QuadratureSpec{1e-7, 1e-8, 4000});
            const double exact = 1.0 - reg_incomplete_beta(p, a, b);
            worst = std::max(worst, std::fabs(gp - exact));
            if (std::fabs(gp - exact) > 1e-3) res.pass = false;
        }
    }
    res.detail = "max abs error " + fmt(worst);
    return res;
}

// --- 8. degenerate closed form: noise-only network --------------------------

CriterionResult criterion_degenerate(const AcceptanceOptions& opt) {
    CriterionResult res{8, "noise-only outage vs closed form (3 sigma)"};
    // alpha=1 and delta=0 make the SINR geometry-free, so a small region
    // samples the identical law faster
    const NetworkParams np = section_iv_params(1.0, 0.0);
    const FblParams fbl(1, 0.5);  // rate reduces to capacity
    SimConfig sim;
    sim.seed = opt.seed;
    sim.region_km = 4.0;
    sim.guard_km = 1.0;
    sim.outage_iterations = 100000;
    sim.threads = opt.threads;

    res.pass = true;
    double worst = 0.0;
    for (double rt : linspace(0.25, 4.0, 15)) {
        const double theta = std::exp2(rt) - 1.0;
        const double closed = -std::expm1(-theta * np.noise / np.rho_o);
        const EstimateResult mc = estimate_outage({rt}, fbl, np, sim);
        const double sigma =
            std::sqrt(closed * (1.0 - closed) / sim.outage_iterations);
        const double z = std::fabs(mc.value - closed) / sigma;
        worst = std::max(worst, z);
        if (z > 3.0) res.pass = false;
    }
    res.detail = "max |z| = " + fmt(worst);
    return res;
}

// --- 9. special-function identities and pinned constants --------------------

CriterionResult criterion_special_functions(const AcceptanceOptions&) {
    CriterionResult res{9, "special functions: identities 1e-12, constants 1e-6"};
    res.pass = true;
    double worst_id = 0.0, worst_const = 0.0;
    auto check_id = [&](double got, double want) {
        const double err = std::fabs(got - want) / std::max(1.0, std::fabs(want));
        worst_id = std::max(worst_id, err);
        if (err > 1e-12) res.pass = false;
    };
    auto check_const = [&](double got, double want) {
        const double err = std::fabs(got - want);
        worst_const = std::max(worst_const, err);
        if (err > 1e-6) res.pass = false;
    };

    for (double x : {0.1, 1.0, 5.0})
        check_id(lower_incomplete_gamma(1.0, x), -std::expm1(-x));
    check_id(lower_incomplete_gamma(2.0, kInf), 1.0);
    check_id(reg_incomplete_beta(1.0, 3.2, 1.7), 1.0);
    check_id(reg_incomplete_beta(0.0, 3.2, 1.7), 0.0);
    check_id(reg_incomplete_beta(0.5, 2.0, 2.0), 0.5);
    const QuadratureSpec tight{1e-13, 1e-16, 20000};
    check_id(integrate_semi_infinite([](double t) { return std::exp(-t); }, 0.0, tight),
             1.0);
    check_id(integrate_semi_infinite([](double t) { return 1.0 / (1.0 + t * t); },
                                     0.0, tight),
             1.5707963267948966);

    // reference values computed with 50-digit arithmetic
    check_const(lower_incomplete_gamma(1.5, 2.0), 0.65451037345177732);
    check_const(reg_incomplete_beta(0.3, 2.0, 5.0), 0.579825);
    check_const(integrate_semi_infinite(
                    [](double t) { return t * std::exp(-t * t); }, 1.0, tight),
                0.18393972058572117);
    auto beta22 = [](double t) {
        const Complex jt(0.0, t);
        return std::exp(complex_log_gamma(2.0 + jt) - complex_log_gamma(2.0) +
                        complex_log_gamma(4.0) - complex_log_gamma(4.0 + jt));
    };
    check_const(gil_pelaez_invert(beta22, 0.5, QuadratureSpec{1e-7, 1e-8, 4000}),
                0.5);

    res.detail = "max identity err " + fmt(worst_id) + ", max constant err " +
                 fmt(worst_const);
    return res;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            std::ostream& progress) {
    using Fn = CriterionResult (*)(const AcceptanceOptions&);
    const Fn criteria[] = {criterion_bracketing,  criterion_ordering,
                           criterion_asymptotic,  criterion_laplace,
                           criterion_sinr_cdf,    criterion_meta,
                           criterion_gil_pelaez,  criterion_degenerate,
                           criterion_special_functions};
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 9; ++id) {
        if (!opt.only.empty() &&
            std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end())
            continue;
        CriterionResult r;
        try {
            r = criteria[id - 1](opt);
        } catch (const std::exception& e) {
            r.id = id;
            r.name = "criterion";
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        progress << "[" << r.id << "/9] " << (r.pass ? "PASS" : "FAIL") << "  "
                 << r.name << "  (" << r.detail << ")\n";
        progress.flush();
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace fblnet
