#pragma once

#include <string>
#include <vector>

namespace fblnet {

enum class MetaMethod { beta_approx, gil_pelaez, mc_exact, mc_lower_bound };

std::string to_string(MetaMethod m);

/// Meta-distribution values over a grid of reliability thresholds.
struct MetaCurve {
    std::vector<double> p_grid;
    std::vector<double> values;
    MetaMethod method = MetaMethod::beta_approx;
};

/// First two moments of the conditional success probability.
struct MomentPair {
    double m1 = 0.0;
    double m2 = 0.0;
};

}  // namespace fblnet
