#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fblnet/experiment.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_path = "-";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;
    bool threads_given = false;
    std::vector<std::string> overrides;
};

void attach_common(CLI::App* sub, CliOptions& o, bool config_required) {
    auto* c = sub->add_option("--config", o.config_path,
                              "experiment configuration (JSON)");
    if (config_required) c->required();
    sub->add_option("--out", o.out_path, "output CSV path ('-' = stdout)");
    sub->add_option("--seed", o.seed, "override sim.seed")
        ->each([&o](const std::string&) { o.seed_given = true; });
    sub->add_option("--threads", o.threads, "worker threads (0 = all cores)")
        ->each([&o](const std::string&) { o.threads_given = true; });
    sub->add_option("--set", o.overrides,
                    "override a config key, e.g. --set network.alpha=1")
        ->take_all();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uplink rate-outage bounds and coding-rate meta distributions "
                 "in the finite-blocklength regime"};
    app.require_subcommand(1);

    const struct {
        const char* name;
        const char* help;
        bool config_required;
    } modes[] = {
        {"outage-analysis", "closed-form outage bounds over an R_t grid", true},
        {"outage-sim", "Monte Carlo outage over an R_t grid", true},
        {"meta-analysis", "closed-form meta-distribution curves", true},
        {"meta-sim", "Monte Carlo meta-distribution curves", true},
        {"compare", "analysis and Monte Carlo side by side", true},
        {"validate", "run the cross-engine validation suite", false},
    };

    CliOptions opts;
    for (const auto& m : modes)
        attach_common(app.add_subcommand(m.name, m.help), opts, m.config_required);

    CLI11_PARSE(app, argc, argv);
    const std::string mode_name = app.get_subcommands().front()->get_name();

    try {
        std::string text = R"({"network":{"lambda_per_km2":2,"rho_dbm":-60,
            "noise_dbm":-90,"eta":4,"alpha":0.5,"delta":0.7},
            "fbl":{"n":128,"eps_bar":1e-2},
            "sweep":{"kind":"outage","rt_min":0.25,"rt_max":4,"rt_count":15}})";
        if (!opts.config_path.empty()) {
            std::ifstream in(opts.config_path);
            if (!in) {
                std::cerr << "cannot open config file: " << opts.config_path << "\n";
                return 2;
            }
            std::stringstream ss;
            ss << in.rdbuf();
            text = ss.str();
        }
        for (const std::string& s : opts.overrides)
            text = fblnet::apply_override(text, s);
        fblnet::ExperimentConfig cfg = fblnet::parse_config(text);
        if (opts.seed_given) cfg.sim.seed = opts.seed;
        if (opts.threads_given) cfg.sim.threads = opts.threads;
        return fblnet::run_experiment(fblnet::parse_mode(mode_name), cfg,
                                      opts.out_path, std::cerr);
    } catch (const fblnet::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
