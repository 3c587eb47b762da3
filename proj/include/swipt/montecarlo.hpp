#pragma once

// Empirical energy-shortage and data-outage probabilities drawn straight
// from the channel and estimation models, plus distributional checks of
// the chi-square decompositions behind the closed forms.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "swipt/model.hpp"
#include "swipt/rng.hpp"
#include "swipt/schemes.hpp"

namespace swipt {

struct BernoulliEstimate {
  double p_hat = 0.0;
  std::int64_t n = 0;
  std::int64_t hits = 0;
  double ci95_low = 0.0;
  double ci95_high = 1.0;

  bool covers(double p) const { return p >= ci95_low && p <= ci95_high; }
  /// Binomial standard error at p_hat.
  double std_err() const;
};

BernoulliEstimate make_bernoulli(std::int64_t hits, std::int64_t n);

struct AlphaPolicy {
  enum class Mode { Fixed, MinimalPerRealization };
  Mode mode = Mode::MinimalPerRealization;
  double alpha = 0.0;

  static AlphaPolicy fixed(double alpha);
  static AlphaPolicy minimal() { return {}; }
};

/// Fraction of draws where the energy harvested in alpha does not cover the
/// scheme's consumption. `allocation.alpha` is held fixed.
BernoulliEstimate mc_energy_shortage(Scheme scheme, const SystemParams& params,
                                     const TimeAllocation& allocation, std::int64_t n,
                                     RngStream seed, int threads = 1);

/// Fixed: energy sufficient and rate below target. Minimal: alpha closes
/// the budget per draw and only the rate event counts.
BernoulliEstimate mc_data_outage(Scheme scheme, const SystemParams& params, AlphaPolicy policy,
                                 double eta, double tau, double target_rate, std::int64_t n,
                                 RngStream seed, int threads = 1);

struct DistributionCheck {
  std::string name;
  double statistic = 0.0;
  double p_value = 1.0;
};

struct IndependenceCheck {
  std::string name;
  double correlation = 0.0;
  double bound = 0.0;  // 4 / sqrt(n)
  bool passed() const { return std::abs(correlation) < bound; }
};

struct DistributionReport {
  std::int64_t n = 0;
  std::vector<DistributionCheck> laws;
  std::vector<IndependenceCheck> independence;

  bool passed(double min_p = 0.01) const;
};

/// Draws n channels with TDD (eta) and FDD (eta, tau) estimates and tests
/// every stated law through probability-integral transforms. Conditional
/// laws become U(0,1) after transforming with the conditional CDF, and
/// conditionally independent pairs give uncorrelated transforms.
DistributionReport mc_distribution_checks(const SystemParams& params, double eta, double tau,
                                          std::int64_t n, RngStream seed, int threads = 1);

}  // namespace swipt
