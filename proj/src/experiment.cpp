#include "fblnet/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fblnet/analysis.hpp"
#include "fblnet/meta.hpp"
#include "fblnet/parallel.hpp"
#include "fblnet/validation.hpp"

namespace fblnet {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

const json* find_path(const json& root, const std::string& dotted) {
    const json* cur = &root;
    std::size_t pos = 0;
    while (pos < dotted.size()) {
        const std::size_t dot = dotted.find('.', pos);
        const std::string key = dotted.substr(pos, dot == std::string::npos
                                                       ? std::string::npos
                                                       : dot - pos);
        if (!cur->is_object() || !cur->contains(key)) return nullptr;
        cur = &(*cur)[key];
        pos = dot == std::string::npos ? dotted.size() : dot + 1;
    }
    return cur;
}

double require_number(const json& root, const std::string& key) {
    const json* v = find_path(root, key);
    if (!v) throw config_error("missing config key: " + key);
    if (!v->is_number()) throw config_error("config key is not a number: " + key);
    return v->get<double>();
}

double number_or(const json& root, const std::string& key, double fallback) {
    const json* v = find_path(root, key);
    if (!v) return fallback;
    if (!v->is_number()) throw config_error("config key is not a number: " + key);
    return v->get<double>();
}

std::vector<double> grid_from(const json& root, const std::string& section,
                              const std::string& stem, bool required) {
    const json* arr = find_path(root, section + "." + stem + "_grid");
    std::vector<double> out;
    if (arr) {
        if (!arr->is_array())
            throw config_error("config key is not an array: " + section + "." + stem +
                               "_grid");
        out = arr->get<std::vector<double>>();
    } else if (find_path(root, section + "." + stem + "_min")) {
        const double lo = require_number(root, section + "." + stem + "_min");
        const double hi = require_number(root, section + "." + stem + "_max");
        const long count =
            static_cast<long>(require_number(root, section + "." + stem + "_count"));
        if (count < 1)
            throw config_error("config key must be >= 1: " + section + "." + stem +
                               "_count");
        for (long i = 0; i < count; ++i)
            out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    } else if (required) {
        throw config_error("missing config key: " + section + "." + stem +
                           "_grid (or " + stem + "_min/_max/_count)");
    }
    if (!out.empty()) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i)
            if (!(out[i] < out[i + 1]))
                throw config_error("grid must be strictly increasing: " + section +
                                   "." + stem + "_grid");
    }
    return out;
}

}  // namespace

RunMode parse_mode(const std::string& name) {
    if (name == "outage-analysis") return RunMode::outage_analysis;
    if (name == "outage-sim") return RunMode::outage_sim;
    if (name == "meta-analysis") return RunMode::meta_analysis;
    if (name == "meta-sim") return RunMode::meta_sim;
    if (name == "compare") return RunMode::compare;
    if (name == "validate") return RunMode::validate;
    throw config_error("unknown mode: " + name);
}

NetworkParams ExperimentConfig::network_params() const {
    return params_from_config(lambda_per_km2, rho_dbm, noise_dbm, eta, alpha, delta);
}

FblParams ExperimentConfig::fbl_params() const { return FblParams(n, eps_bar); }

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }

    ExperimentConfig cfg;
    cfg.lambda_per_km2 = require_number(root, "network.lambda_per_km2");
    cfg.rho_dbm = require_number(root, "network.rho_dbm");
    cfg.noise_dbm = require_number(root, "network.noise_dbm");
    cfg.eta = require_number(root, "network.eta");
    cfg.alpha = require_number(root, "network.alpha");
    cfg.delta = require_number(root, "network.delta");
    cfg.n = static_cast<long>(require_number(root, "fbl.n"));
    cfg.eps_bar = require_number(root, "fbl.eps_bar");

    const json* kind = find_path(root, "sweep.kind");
    if (!kind || !kind->is_string())
        throw config_error("missing config key: sweep.kind (\"outage\" or \"meta\")");
    const std::string k = kind->get<std::string>();
    if (k == "outage") {
        cfg.sweep.kind = SweepSpec::Kind::outage;
        cfg.sweep.rt_grid = grid_from(root, "sweep", "rt", true);
        if (cfg.sweep.rt_grid.empty())
            throw config_error("empty grid: sweep.rt_grid");
    } else if (k == "meta") {
        cfg.sweep.kind = SweepSpec::Kind::meta;
        const json* list = find_path(root, "sweep.rt_list");
        if (!list || !list->is_array() || list->empty())
            throw config_error("missing or empty config key: sweep.rt_list");
        cfg.sweep.rt_list = list->get<std::vector<double>>();
        cfg.sweep.pth_grid = grid_from(root, "sweep", "pth", true);
        if (cfg.sweep.pth_grid.empty())
            throw config_error("empty grid: sweep.pth_grid");
        for (double p : cfg.sweep.pth_grid)
            if (!(p > 0.0 && p < 1.0))
                throw config_error("sweep.pth_grid values must lie in (0,1)");
    } else {
        throw config_error("sweep.kind must be \"outage\" or \"meta\"");
    }

    cfg.sim.seed = static_cast<std::uint64_t>(number_or(root, "sim.seed", 20260809));
    cfg.sim.region_km = number_or(root, "sim.region_km", 30.0);
    cfg.sim.guard_km = number_or(root, "sim.guard_km", 5.0);
    cfg.sim.outage_iterations =
        static_cast<long>(number_or(root, "sim.outage_iterations", 10000));
    cfg.sim.meta_samples_per_ue =
        static_cast<long>(number_or(root, "sim.meta_samples_per_ue", 20000));
    cfg.sim.laplace_min_samples =
        static_cast<long>(number_or(root, "sim.laplace_min_samples", 100000));
    cfg.sim.batch = static_cast<long>(number_or(root, "sim.batch", 256));
    cfg.sim.threads = static_cast<int>(number_or(root, "sim.threads", 0));

    const json* gp = find_path(root, "meta_gil_pelaez");
    if (gp) {
        if (!gp->is_boolean()) throw config_error("meta_gil_pelaez must be boolean");
        cfg.meta_gil_pelaez = gp->get<bool>();
    }

    // fail fast on physically invalid parameters, naming the section
    try {
        (void)cfg.network_params();
        (void)cfg.fbl_params();
        cfg.sim.validate();
    } catch (const std::exception& e) {
        throw config_error(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string apply_override(const std::string& json_text, const std::string& spec) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos)
        throw config_error("override must look like key.path=value: " + spec);
    const std::string path = spec.substr(0, eq);
    const std::string raw = spec.substr(eq + 1);
    json root;
    try {
        root = json::parse(json_text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;  // bare strings stay strings
    }
    json* cur = &root;
    std::size_t pos = 0;
    while (true) {
        const std::size_t dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot == std::string::npos
                                                     ? std::string::npos
                                                     : dot - pos);
        if (key.empty()) throw config_error("bad override path: " + spec);
        if (dot == std::string::npos) {
            (*cur)[key] = value;
            break;
        }
        cur = &(*cur)[key];
        pos = dot + 1;
    }
    return root.dump(2);
}

namespace {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string render_csv(const Table& t, const ExperimentConfig& cfg, RunMode mode) {
    std::ostringstream out;
    const char* mode_names[] = {"outage-analysis", "outage-sim", "meta-analysis",
                                "meta-sim", "compare", "validate"};
    out << "# fblnet " << mode_names[static_cast<int>(mode)] << "\n";
    const NetworkParams np = cfg.network_params();
    out << "# network.lambda_per_km2 = " << fmt(cfg.lambda_per_km2) << "\n"
        << "# network.rho_dbm = " << fmt(cfg.rho_dbm) << "\n"
        << "# network.noise_dbm = " << fmt(cfg.noise_dbm) << "\n"
        << "# network.eta = " << fmt(cfg.eta) << "\n"
        << "# network.alpha = " << fmt(cfg.alpha) << "\n"
        << "# network.delta = " << fmt(cfg.delta) << "\n"
        << "# fbl.n = " << cfg.n << "\n"
        << "# fbl.eps_bar = " << fmt(cfg.eps_bar) << "\n"
        << "# sim.seed = " << cfg.sim.seed << "\n"
        << "# sim.region_km = " << fmt(cfg.sim.region_km) << "\n"
        << "# sim.guard_km = " << fmt(cfg.sim.guard_km) << "\n"
        << "# derived.lambda_bs_per_m2 = " << fmt(np.lambda_bs) << "\n"
        << "# derived.rho_watt = " << fmt(np.rho_o) << "\n"
        << "# derived.noise_watt = " << fmt(np.noise) << "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        out << t.columns[c] << (c + 1 < t.columns.size() ? "," : "\n");
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!std::isfinite(row[c]))
                throw std::runtime_error("non-finite value in CSV output");
            out << fmt(row[c]) << (c + 1 < row.size() ? "," : "\n");
        }
    }
    return out.str();
}

Table outage_analysis_table(const ExperimentConfig& cfg) {
    const NetworkParams np = cfg.network_params();
    const FblParams fbl = cfg.fbl_params();
    const auto& grid = cfg.sweep.rt_grid;
    std::vector<OutageBounds> bounds(grid.size());
    std::vector<double> ar(grid.size());
    parallel_for(grid.size(), cfg.sim.threads, [&](std::size_t i) {
        bounds[i] = outage_bounds_opt({grid[i]}, fbl, np);
        ar[i] = ar_outage({grid[i]}, np);
    });
    Table t;
    t.columns = {"R_t",         "upper_opt",   "lower_opt",
                 "upper_simpl", "lower_simpl", "ar_outage"};
    for (std::size_t i = 0; i < grid.size(); ++i)
        t.rows.push_back({grid[i], bounds[i].upper, bounds[i].lower,
                          bounds[i].simplified_upper, bounds[i].simplified_lower,
                          ar[i]});
    return t;
}

Table outage_sim_table(const ExperimentConfig& cfg) {
    const NetworkParams np = cfg.network_params();
    const FblParams fbl = cfg.fbl_params();
    Table t;
    t.columns = {"R_t", "mc_outage", "mc_se"};
    for (double rt : cfg.sweep.rt_grid) {
        const EstimateResult r = estimate_outage({rt}, fbl, np, cfg.sim);
        t.rows.push_back({rt, r.value, r.std_error});
    }
    return t;
}

Table meta_analysis_table(const ExperimentConfig& cfg) {
    const NetworkParams np = cfg.network_params();
    const FblParams fbl = cfg.fbl_params();
    Table t;
    t.columns = {"R_t", "p_th", "beta_approx"};
    if (cfg.meta_gil_pelaez) t.columns.push_back("gil_pelaez");
    t.columns.push_back("ar_meta");
    for (double rt : cfg.sweep.rt_list) {
        const double theta_fbr = sinr_threshold({rt}, fbl, kInf);
        const double theta_ar = std::exp2(rt) - 1.0;
        const MomentPair mom = threshold_moment_pair(theta_fbr, np);
        const MomentPair mom_ar =
            theta_ar > 0.0 ? threshold_moment_pair(theta_ar, np)
                           : MomentPair{1.0, 1.0};
        for (double p : cfg.sweep.pth_grid) {
            std::vector<double> row{rt, p, meta_beta_from_moments(p, mom)};
            if (cfg.meta_gil_pelaez)
                row.push_back(meta_gil_pelaez(p, {rt}, fbl, np));
            row.push_back(meta_beta_from_moments(p, mom_ar));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

Table meta_sim_table(const ExperimentConfig& cfg) {
    const NetworkParams np = cfg.network_params();
    const FblParams fbl = cfg.fbl_params();
    const auto curves = estimate_meta_multi(cfg.sweep.rt_list, fbl, np, cfg.sim,
                                            cfg.sweep.pth_grid);
    Table t;
    t.columns = {"R_t", "p_th", "mc_exact", "mc_lower_bound"};
    for (std::size_t k = 0; k < cfg.sweep.rt_list.size(); ++k)
        for (std::size_t i = 0; i < cfg.sweep.pth_grid.size(); ++i)
            t.rows.push_back({cfg.sweep.rt_list[k], cfg.sweep.pth_grid[i],
                              curves[k].exact.values[i],
                              curves[k].lower_bound.values[i]});
    return t;
}

Table compare_table(const ExperimentConfig& cfg) {
    if (cfg.sweep.kind == SweepSpec::Kind::outage) {
        Table a = outage_analysis_table(cfg);
        Table s = outage_sim_table(cfg);
        a.columns.push_back("mc_outage");
        a.columns.push_back("mc_se");
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            a.rows[i].push_back(s.rows[i][1]);
            a.rows[i].push_back(s.rows[i][2]);
        }
        return a;
    }
    Table a = meta_analysis_table(cfg);
    Table s = meta_sim_table(cfg);
    // splice the simulated columns in front of ar_meta
    Table t;
    t.columns = a.columns;
    t.columns.pop_back();
    t.columns.push_back("mc_exact");
    t.columns.push_back("mc_lower_bound");
    t.columns.push_back("ar_meta");
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        std::vector<double> row = a.rows[i];
        const double ar = row.back();
        row.pop_back();
        row.push_back(s.rows[i][2]);
        row.push_back(s.rows[i][3]);
        row.push_back(ar);
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace

std::string render_experiment_csv(RunMode mode, const ExperimentConfig& cfg) {
    Table t;
    switch (mode) {
        case RunMode::outage_analysis:
            if (cfg.sweep.kind != SweepSpec::Kind::outage)
                throw config_error("outage-analysis requires sweep.kind = \"outage\"");
            t = outage_analysis_table(cfg);
            break;
        case RunMode::outage_sim:
            if (cfg.sweep.kind != SweepSpec::Kind::outage)
                throw config_error("outage-sim requires sweep.kind = \"outage\"");
            t = outage_sim_table(cfg);
            break;
        case RunMode::meta_analysis:
            if (cfg.sweep.kind != SweepSpec::Kind::meta)
                throw config_error("meta-analysis requires sweep.kind = \"meta\"");
            t = meta_analysis_table(cfg);
            break;
        case RunMode::meta_sim:
            if (cfg.sweep.kind != SweepSpec::Kind::meta)
                throw config_error("meta-sim requires sweep.kind = \"meta\"");
            t = meta_sim_table(cfg);
            break;
        case RunMode::compare:
            t = compare_table(cfg);
            break;
        case RunMode::validate:
            throw config_error("validate mode produces a report, not CSV");
    }
    return render_csv(t, cfg, mode);
}

int run_experiment(RunMode mode, const ExperimentConfig& cfg,
                   const std::string& out_path, std::ostream& log) {
    if (mode == RunMode::validate) {
        AcceptanceOptions opt;
        opt.threads = cfg.sim.threads;
        const auto results = run_acceptance(opt, log);
        bool all = true;
        for (const auto& r : results) all = all && r.pass;
        return all ? 0 : 1;
    }
    std::string csv;
    try {
        csv = render_experiment_csv(mode, cfg);
    } catch (const accuracy_error& e) {
        log << "numerical accuracy failure: " << e.what() << "\n";
        return 3;
    }
    if (out_path == "-" || out_path.empty()) {
        std::cout << csv;
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        log << "cannot open output file: " << out_path << "\n";
        return 2;
    }
    out << csv;
    log << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace fblnet
