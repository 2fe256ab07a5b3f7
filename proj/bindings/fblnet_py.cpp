#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "fblnet/analysis.hpp"
#include "fblnet/fbl.hpp"
#include "fblnet/meta.hpp"
#include "fblnet/network.hpp"
#include "fblnet/numerics.hpp"
#include "fblnet/simulator.hpp"

namespace py = pybind11;
using namespace fblnet;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PYBIND11_MODULE(_core, m) {
    m.doc() = "Uplink rate-outage bounds and coding-rate meta distributions "
              "in the finite-blocklength regime";

    py::register_exception<accuracy_error>(m, "AccuracyError");
    py::register_exception<degeneracy_error>(m, "DegeneracyError");

    py::class_<FblParams>(m, "FblParams")
        .def(py::init<long, double>(), py::arg("n"), py::arg("eps_bar"))
        .def_readonly("n", &FblParams::n)
        .def_readonly("eps_bar", &FblParams::eps_bar);

    py::class_<NetworkParams>(m, "NetworkParams")
        .def(py::init<double, double, double, double, double, double>(),
             py::arg("lambda_bs"), py::arg("eta"), py::arg("alpha"),
             py::arg("rho_o"), py::arg("noise"), py::arg("delta"))
        .def_readonly("lambda_bs", &NetworkParams::lambda_bs)
        .def_readonly("eta", &NetworkParams::eta)
        .def_readonly("alpha", &NetworkParams::alpha)
        .def_readonly("rho_o", &NetworkParams::rho_o)
        .def_readonly("noise", &NetworkParams::noise)
        .def_readonly("delta", &NetworkParams::delta);

    py::class_<OutageBounds>(m, "OutageBounds")
        .def_readonly("upper", &OutageBounds::upper)
        .def_readonly("lower", &OutageBounds::lower)
        .def_readonly("upsilon_opt", &OutageBounds::upsilon_opt)
        .def_readonly("lambda_opt", &OutageBounds::lambda_opt)
        .def_readonly("simplified_upper", &OutageBounds::simplified_upper)
        .def_readonly("simplified_lower", &OutageBounds::simplified_lower);

    py::class_<MomentPair>(m, "MomentPair")
        .def_readonly("m1", &MomentPair::m1)
        .def_readonly("m2", &MomentPair::m2);

    py::class_<MetaCurve>(m, "MetaCurve")
        .def_readonly("p_grid", &MetaCurve::p_grid)
        .def_readonly("values", &MetaCurve::values)
        .def_property_readonly(
            "method", [](const MetaCurve& c) { return to_string(c.method); });

    py::class_<MetaEstimates>(m, "MetaEstimates")
        .def_readonly("exact", &MetaEstimates::exact)
        .def_readonly("lower_bound", &MetaEstimates::lower_bound);

    py::class_<EstimateResult>(m, "EstimateResult")
        .def_readonly("value", &EstimateResult::value)
        .def_readonly("std_error", &EstimateResult::std_error)
        .def_readonly("samples", &EstimateResult::samples);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("region_km", &SimConfig::region_km)
        .def_readwrite("guard_km", &SimConfig::guard_km)
        .def_readwrite("outage_iterations", &SimConfig::outage_iterations)
        .def_readwrite("meta_samples_per_ue", &SimConfig::meta_samples_per_ue)
        .def_readwrite("laplace_min_samples", &SimConfig::laplace_min_samples)
        .def_readwrite("batch", &SimConfig::batch)
        .def_readwrite("threads", &SimConfig::threads);

    m.def("params_from_config", &params_from_config, py::arg("lambda_per_km2"),
          py::arg("rho_dbm"), py::arg("noise_dbm"), py::arg("eta"),
          py::arg("alpha"), py::arg("delta"));
    m.def("dbm_to_watt", &dbm_to_watt);
    m.def("watt_to_dbm", &watt_to_dbm);
    m.def("serving_distance_pdf", &serving_distance_pdf);

    m.def("channel_dispersion", &channel_dispersion);
    m.def("q_inverse", &q_inverse);
    m.def("penalty_a", &penalty_a, py::arg("x"), py::arg("fbl"));
    m.def("bonus_b", &bonus_b);
    m.def(
        "fbr_rate",
        [](double omega, const FblParams& fbl) {
            return fbr_rate(omega, fbl).bits_per_channel_use;
        },
        py::arg("omega"), py::arg("fbl"));
    m.def(
        "sinr_threshold",
        [](double rt, const FblParams& fbl, double x) {
            return sinr_threshold({rt}, fbl, x);
        },
        py::arg("rt"), py::arg("fbl"), py::arg("x") = kInf);

    m.def("lower_incomplete_gamma", &lower_incomplete_gamma);
    m.def("reg_incomplete_beta", &reg_incomplete_beta);

    m.def("interference_intensity", &interference_intensity);
    m.def("laplace_interference", &laplace_interference);
    m.def("sinr_cdf", &sinr_cdf, py::call_guard<py::gil_scoped_release>());
    m.def(
        "outage_upper",
        [](double rt, double upsilon, const FblParams& fbl, const NetworkParams& np) {
            return outage_upper({rt}, upsilon, fbl, np);
        },
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "outage_lower",
        [](double rt, double lam, const FblParams& fbl, const NetworkParams& np) {
            return outage_lower({rt}, lam, fbl, np);
        },
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "outage_bounds_opt",
        [](double rt, const FblParams& fbl, const NetworkParams& np) {
            return outage_bounds_opt({rt}, fbl, np);
        },
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "ar_outage",
        [](double rt, const NetworkParams& np) { return ar_outage({rt}, np); },
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "beta_fit",
        [](double m1, double m2) { return beta_fit({m1, m2}); },
        py::arg("m1"), py::arg("m2"));
    m.def("threshold_moment_pair", &threshold_moment_pair,
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "moment_hat",
        [](Complex b, double rt, const FblParams& fbl, const NetworkParams& np) {
            return moment_hat(b, {rt}, fbl, np);
        },
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "meta_beta",
        [](double p, double rt, const FblParams& fbl, const NetworkParams& np) {
            return meta_beta(p, {rt}, fbl, np);
        },
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "meta_gil_pelaez",
        [](double p, double rt, const FblParams& fbl, const NetworkParams& np) {
            return meta_gil_pelaez(p, {rt}, fbl, np);
        },
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "ar_meta",
        [](double p, double rt, const NetworkParams& np) {
            return ar_meta(p, {rt}, np);
        },
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "estimate_outage",
        [](double rt, const FblParams& fbl, const NetworkParams& np,
           const SimConfig& cfg) { return estimate_outage({rt}, fbl, np, cfg); },
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "estimate_meta",
        [](double rt, const FblParams& fbl, const NetworkParams& np,
           const SimConfig& cfg, const std::vector<double>& p_grid) {
            return estimate_meta({rt}, fbl, np, cfg, p_grid);
        },
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "estimate_laplace",
        [](double s, double r0_lo, double r0_hi, const NetworkParams& np,
           const SimConfig& cfg) {
            return estimate_laplace(s, {r0_lo, r0_hi}, np, cfg);
        },
        py::call_guard<py::gil_scoped_release>());
    m.def("sample_sinr_batch", &sample_sinr_batch,
          py::call_guard<py::gil_scoped_release>());
}
