#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fblnet {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AcceptanceOptions {
    int threads = 0;
    std::uint64_t seed = 20260809ULL;
    std::vector<int> only;  // criterion ids to run; empty = all
};

/// Runs the cross-engine validation suite (closed forms vs Monte Carlo),
/// printing one line per criterion to `progress` as results arrive.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            std::ostream& progress);

}  // namespace fblnet
