#pragma once

// Sweep runners behind the command-line tool. Each returns a table whose
// rows follow config order (L, then SNR, then scheme), independent of the
// thread count.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "swipt/config.hpp"

namespace swipt {

struct Table {
  using Cell = std::variant<std::monostate, std::string, double, std::int64_t, bool>;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// RFC 4180 CSV. Reals use 17 significant digits and no locale.
  void write_csv(std::ostream& out) const;
  std::string csv() const;
  /// Index of a column, or throws std::out_of_range.
  std::size_t column(const std::string& name) const;
};

/// Always 17 significant digits, so equal doubles give equal text.
std::string format_real(double x);

/// Ergodic rates at the configured training source, the grid-search
/// optimum, zeta = rate / grid rate and the ratio to non-CSI. All columns of
/// one L share a single set of channel draws.
Table run_rate_sweep(const ExperimentConfig& config, int threads = 1);

/// Closed-form shortage and outage probabilities next to Monte-Carlo
/// estimates with Wilson intervals.
Table run_outage_sweep(const ExperimentConfig& config, int threads = 1);

/// Training and feedback fractions from each approximation and from grid search.
Table run_optimize(const ExperimentConfig& config, int threads = 1);

/// Training fractions the sweeps use for one point.
TrainingOptimum resolve_training(const ExperimentConfig& config, Scheme scheme,
                                 const SystemParams& params, int threads = 1);

}  // namespace swipt
