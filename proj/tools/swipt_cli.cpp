// swipt: sweeps and validation for the SWIPT MISO simulator.
//
// Exit codes: 0 success, 1 validation failure or unexpected error,
// 2 configuration or usage error, 3 numerical nonconvergence.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "swipt/config.hpp"
#include "swipt/errors.hpp"
#include "swipt/experiments.hpp"
#include "swipt/specfun.hpp"
#include "swipt/validate.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kConfigError = 2;
constexpr int kNonConvergence = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> samples;
  std::string out;
  int threads = 1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "Experiment config file (INI-style)");
  app->add_option("--seed", c.seed, "Override the config seed");
  app->add_option("--samples", c.samples, "Override the Monte-Carlo sample count")
      ->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "Output path (default: config out, else stdout)");
  app->add_option("--threads", c.threads, "Worker threads; results do not depend on it")
      ->check(CLI::Range(1, 1024));
}

swipt::ExperimentConfig load(const Common& c) {
  swipt::ExperimentConfig cfg =
      c.config.empty() ? swipt::ExperimentConfig{} : swipt::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.samples) cfg.samples = *c.samples;
  if (!c.out.empty()) cfg.out = c.out;
  cfg.validate();
  return cfg;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw swipt::ConfigError(path + ": cannot open output file");
  f << text;
  if (!f) throw std::runtime_error(path + ": write failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SWIPT MISO simulator: rate and outage sweeps, training optimisation, validation"};
  app.require_subcommand(1);

  Common rate, outage, optimize, validate;
  auto* rate_cmd = app.add_subcommand("rate-sweep", "Ergodic rates, zeta and R/R_NC per point");
  add_common(rate_cmd, rate);
  auto* outage_cmd =
      app.add_subcommand("outage-sweep", "Closed-form shortage/outage next to Monte-Carlo");
  add_common(outage_cmd, outage);
  auto* optimize_cmd = app.add_subcommand("optimize", "Training fractions by method");
  add_common(optimize_cmd, optimize);

  auto* validate_cmd = app.add_subcommand("validate", "Run the property and oracle suite");
  add_common(validate_cmd, validate);
  bool quick = false, verbose = false;
  std::vector<std::string> groups;
  double perturb = 0.0;
  validate_cmd->add_flag("--quick", quick, "Smaller sample sizes");
  validate_cmd->add_flag("--verbose,-v", verbose, "Print every check");
  validate_cmd->add_option("--group", groups, "Run only these groups (repeatable)");
  validate_cmd->add_option("--perturb-marcum", perturb, "Negative control: scale marcum_q by 1+eps")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*rate_cmd) {
      const auto cfg = load(rate);
      emit(cfg.out, swipt::run_rate_sweep(cfg, rate.threads).csv());
    } else if (*outage_cmd) {
      const auto cfg = load(outage);
      emit(cfg.out, swipt::run_outage_sweep(cfg, outage.threads).csv());
    } else if (*optimize_cmd) {
      const auto cfg = load(optimize);
      emit(cfg.out, swipt::run_optimize(cfg, optimize.threads).csv());
    } else {
      swipt::ValidationOptions opt;
      if (!validate.config.empty()) opt.seed = load(validate).seed;
      if (validate.seed) opt.seed = *validate.seed;
      if (validate.samples) {
        throw swipt::ConfigError("validate: --samples is fixed by the suite; use --quick");
      }
      opt.full = !quick;
      opt.threads = validate.threads;
      opt.groups = groups;
      swipt::specfun::testing::set_marcum_perturbation(perturb);
      const auto report = swipt::run_validate(opt);
      emit(validate.out, report.text(verbose));
      return report.passed() ? kOk : kFailure;
    }
  } catch (const swipt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const swipt::PreconditionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const swipt::NonConvergenceError& e) {
    std::cerr << "nonconvergence: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
