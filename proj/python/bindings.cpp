#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swipt/analytic.hpp"
#include "swipt/config.hpp"
#include "swipt/errors.hpp"
#include "swipt/experiments.hpp"
#include "swipt/model.hpp"
#include "swipt/montecarlo.hpp"
#include "swipt/outage.hpp"
#include "swipt/specfun.hpp"
#include "swipt/validate.hpp"

namespace py = pybind11;
using namespace swipt;

namespace {

py::dict report_to_dict(const ValidationReport& r) {
  py::list groups;
  for (const auto& g : r.groups) {
    py::list checks;
    for (const auto& c : g.checks) {
      checks.append(py::dict(py::arg("name") = c.name, py::arg("passed") = c.passed,
                             py::arg("counted") = c.counted, py::arg("detail") = c.detail));
    }
    groups.append(py::dict(py::arg("name") = g.name, py::arg("passed") = g.passed,
                           py::arg("seconds") = g.seconds, py::arg("checks") = checks));
  }
  return py::dict(py::arg("passed") = r.passed(), py::arg("groups") = groups);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "SWIPT MISO simulator core";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<Scheme>(m, "Scheme")
      .value("NON_CSI", Scheme::NonCsi)
      .value("TDD", Scheme::Tdd)
      .value("FDD", Scheme::Fdd);
  py::enum_<Regime>(m, "Regime")
      .value("HIGH_SNR", Regime::HighSnr)
      .value("LOW_SNR", Regime::LowSnr)
      .value("GRID_SEARCH", Regime::GridSearch);

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def(py::init<int, double, double, double, int, double, double, double>(), py::arg("L"),
           py::arg("P"), py::arg("N0"), py::arg("beta"), py::arg("Tc"), py::arg("Pd"),
           py::arg("Pe"), py::arg("Pf"))
      .def_static("defaults", &SystemParams::defaults, py::arg("L") = 3, py::arg("snr_db") = 30.0)
      .def("with_snr_db", &SystemParams::with_snr_db)
      .def("validate", &SystemParams::validate)
      .def_property_readonly("snr_db", &SystemParams::snr_db)
      .def_readwrite("L", &SystemParams::L)
      .def_readwrite("P", &SystemParams::P)
      .def_readwrite("N0", &SystemParams::N0)
      .def_readwrite("beta", &SystemParams::beta)
      .def_readwrite("Tc", &SystemParams::Tc)
      .def_readwrite("Pd", &SystemParams::Pd)
      .def_readwrite("Pe", &SystemParams::Pe)
      .def_readwrite("Pf", &SystemParams::Pf)
      .def("__repr__", [](const SystemParams& p) {
        return "SystemParams(L=" + std::to_string(p.L) + ", snr_db=" + format_real(p.snr_db()) +
               ")";
      });

  // Special functions
  m.def("reg_gamma_lower", &specfun::reg_gamma_lower, py::arg("a"), py::arg("x"));
  m.def("reg_gamma_upper", &specfun::reg_gamma_upper, py::arg("a"), py::arg("x"));
  m.def("bessel_i", &specfun::bessel_i, py::arg("n"), py::arg("x"));
  m.def("marcum_q", &specfun::marcum_q, py::arg("m"), py::arg("a"), py::arg("b"));
  m.def(
      "noncentral_chi2_sf",
      [](int dof, double nc, double x) {
        return specfun::noncentral_chi2_sf(specfun::NoncentralChi2(dof, nc), x);
      },
      py::arg("dof"), py::arg("noncentrality"), py::arg("x"));
  m.def(
      "noncentral_chi2_cdf",
      [](int dof, double nc, double x) {
        return specfun::noncentral_chi2_cdf(specfun::NoncentralChi2(dof, nc), x);
      },
      py::arg("dof"), py::arg("noncentrality"), py::arg("x"));

  // Training and rates
  py::class_<TrainingOptimum>(m, "TrainingOptimum")
      .def_readonly("eta", &TrainingOptimum::eta)
      .def_readonly("tau", &TrainingOptimum::tau)
      .def_readonly("regime", &TrainingOptimum::regime)
      .def_readonly("clamped", &TrainingOptimum::clamped);
  py::class_<ErgodicEstimate>(m, "ErgodicEstimate")
      .def_readonly("mean", &ErgodicEstimate::mean)
      .def_readonly("std_err", &ErgodicEstimate::std_err)
      .def_readonly("n_samples", &ErgodicEstimate::n_samples);
  m.def("analytic_optimum", &analytic_optimum, py::arg("scheme"), py::arg("params"),
        py::arg("regime"));
  m.def("default_regime", &default_regime, py::arg("params"));
  m.def(
      "ergodic_rate",
      [](Scheme s, const SystemParams& p, double eta, double tau, std::int64_t n,
         std::uint64_t seed, int threads) {
        py::gil_scoped_release release;
        return ergodic_rate(s, p, eta, tau, n, RngStream{seed, 0}, threads);
      },
      py::arg("scheme"), py::arg("params"), py::arg("eta") = 0.0, py::arg("tau") = 0.0,
      py::arg("n_samples") = 100000, py::arg("seed") = 1, py::arg("threads") = 1);

  // Closed forms
  py::class_<OutageResult>(m, "OutageResult")
      .def_readonly("probability", &OutageResult::probability)
      .def_readonly("est_error", &OutageResult::est_error)
      .def_readonly("branch", &OutageResult::branch)
      .def_readonly("converged", &OutageResult::converged);
  m.def(
      "energy_shortage",
      [](Scheme s, const SystemParams& p, double alpha, double eta, double tau) {
        py::gil_scoped_release release;
        return energy_shortage(s, p, alpha, eta, tau);
      },
      py::arg("scheme"), py::arg("params"), py::arg("alpha"), py::arg("eta") = 0.0,
      py::arg("tau") = 0.0);
  m.def(
      "data_outage",
      [](Scheme s, const SystemParams& p, double alpha, double eta, double tau, double rate) {
        py::gil_scoped_release release;
        return data_outage(s, p, alpha, eta, tau, rate);
      },
      py::arg("scheme"), py::arg("params"), py::arg("alpha"), py::arg("eta") = 0.0,
      py::arg("tau") = 0.0, py::arg("target_rate") = 6.0);
  m.def("mean_channel_alpha", &mean_channel_alpha, py::arg("scheme"), py::arg("params"),
        py::arg("eta") = 0.0, py::arg("tau") = 0.0);

  // Monte-Carlo
  py::class_<BernoulliEstimate>(m, "BernoulliEstimate")
      .def_readonly("p_hat", &BernoulliEstimate::p_hat)
      .def_readonly("n", &BernoulliEstimate::n)
      .def_readonly("hits", &BernoulliEstimate::hits)
      .def_readonly("ci95_low", &BernoulliEstimate::ci95_low)
      .def_readonly("ci95_high", &BernoulliEstimate::ci95_high)
      .def("covers", &BernoulliEstimate::covers);
  m.def(
      "mc_energy_shortage",
      [](Scheme s, const SystemParams& p, double alpha, double eta, double tau, std::int64_t n,
         std::uint64_t seed, int threads) {
        py::gil_scoped_release release;
        return mc_energy_shortage(s, p, TimeAllocation(alpha, eta, tau), n, RngStream{seed, 0},
                                  threads);
      },
      py::arg("scheme"), py::arg("params"), py::arg("alpha"), py::arg("eta") = 0.0,
      py::arg("tau") = 0.0, py::arg("n") = 100000, py::arg("seed") = 1, py::arg("threads") = 1);
  m.def(
      "mc_data_outage",
      [](Scheme s, const SystemParams& p, std::optional<double> alpha, double eta, double tau,
         double rate, std::int64_t n, std::uint64_t seed, int threads) {
        py::gil_scoped_release release;
        const AlphaPolicy policy = alpha ? AlphaPolicy::fixed(*alpha) : AlphaPolicy::minimal();
        return mc_data_outage(s, p, policy, eta, tau, rate, n, RngStream{seed, 0}, threads);
      },
      py::arg("scheme"), py::arg("params"), py::arg("alpha") = py::none(), py::arg("eta") = 0.0,
      py::arg("tau") = 0.0, py::arg("target_rate") = 6.0, py::arg("n") = 100000,
      py::arg("seed") = 1, py::arg("threads") = 1);

  // Sweeps: config text in, CSV text out.
  auto sweep = [](Table (*run)(const ExperimentConfig&, int)) {
    return [run](const std::string& text, int threads) {
      const ExperimentConfig c = parse_config(text, "<string>");
      py::gil_scoped_release release;
      return run(c, threads).csv();
    };
  };
  m.def("rate_sweep", sweep(&run_rate_sweep), py::arg("config") = "", py::arg("threads") = 1);
  m.def("outage_sweep", sweep(&run_outage_sweep), py::arg("config") = "", py::arg("threads") = 1);
  m.def("optimize", sweep(&run_optimize), py::arg("config") = "", py::arg("threads") = 1);
  m.def(
      "validate",
      [](std::vector<std::string> groups, bool full, std::uint64_t seed) {
        ValidationOptions o;
        o.groups = std::move(groups);
        o.full = full;
        o.seed = seed;
        ValidationReport r;
        {
          py::gil_scoped_release release;
          r = run_validate(o);
        }
        return report_to_dict(r);
      },
      py::arg("groups") = std::vector<std::string>{}, py::arg("full") = false,
      py::arg("seed") = ValidationOptions{}.seed);
}
