#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fblnet/fbl.hpp"
#include "fblnet/network.hpp"
#include "fblnet/simulator.hpp"

namespace fblnet {

/// Configuration problem: message names the offending key.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RunMode {
    outage_analysis,
    outage_sim,
    meta_analysis,
    meta_sim,
    compare,
    validate,
};

RunMode parse_mode(const std::string& name);

struct SweepSpec {
    enum class Kind { outage, meta } kind = Kind::outage;
    std::vector<double> rt_grid;   // outage sweeps
    std::vector<double> rt_list;   // meta target rates
    std::vector<double> pth_grid;  // meta reliability grid
};

struct ExperimentConfig {
    double lambda_per_km2 = 2.0;
    double rho_dbm = -60.0;
    double noise_dbm = -90.0;
    double eta = 4.0;
    double alpha = 0.5;
    double delta = 0.7;
    long n = 128;
    double eps_bar = 1e-2;
    SweepSpec sweep;
    SimConfig sim;
    bool meta_gil_pelaez = true;

    NetworkParams network_params() const;
    FblParams fbl_params() const;
};

/// Parses a config document (JSON), with diagnostics naming dotted keys.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Applies a `key.path=value` override to the raw JSON text.
std::string apply_override(const std::string& json_text, const std::string& spec);

/// Runs one mode and writes its CSV to out_path ("-" = stdout). Returns a
/// process exit status: 0 ok, 2 config error, 3 numerical failure.
int run_experiment(RunMode mode, const ExperimentConfig& cfg,
                   const std::string& out_path, std::ostream& log);

/// The CSV payload for a mode, exposed for tests.
std::string render_experiment_csv(RunMode mode, const ExperimentConfig& cfg);

}  // namespace fblnet
