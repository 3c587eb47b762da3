#pragma once

// Experiment configuration: a flat key = value file with [section]
// headers. The schema is documented in README.md and configs/default.ini.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swipt/analytic.hpp"
#include "swipt/model.hpp"
#include "swipt/outage.hpp"

namespace swipt {

enum class TrainingSource { AnalyticAuto, AnalyticHigh, AnalyticLow, GridSearch, Explicit };
enum class PolicyMode { Fixed, Minimal };

std::string_view to_string(TrainingSource s);

struct ExperimentConfig {
  // [system]
  std::vector<int> L{3};
  std::vector<double> snr_db{0, 5, 10, 15, 20, 25, 30};
  double beta = 0.5;
  double P = 1.0;
  int Tc = 1000;
  double Pd = 1e-3;
  double Pe = 1e-2;
  double Pf = 1e-2;

  // [run]
  std::vector<Scheme> schemes{Scheme::NonCsi, Scheme::Tdd, Scheme::Fdd};
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  double target_rate = 6.0;
  TrainingSource training = TrainingSource::AnalyticAuto;
  double eta = 0.0;  // explicit training values
  double tau = 0.0;
  bool grid = true;  // rate sweep also runs the grid search
  GridSpec grid_spec;
  std::string out;

  // [outage]
  PolicyMode alpha_policy = PolicyMode::Fixed;
  std::optional<double> alpha;        // overrides alpha_scales
  std::vector<double> alpha_scales{1.0, 2.0};  // multiples of the mean-channel alpha
  QuadratureSpec quadrature;

  /// Parameters at one (L, SNR) point.
  SystemParams params(int L, double snr_db) const;

  /// Checks every value against the preconditions of the modules that will
  /// consume it. Throws ConfigError.
  void validate() const;
};

/// Parses config text. Errors are reported as "source:line: message".
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");
ExperimentConfig load_config(const std::string& path);

}  // namespace swipt
