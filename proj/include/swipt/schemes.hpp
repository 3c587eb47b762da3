#pragma once

// Per-realization energy-harvesting fractions and downlink rates of the
// non-CSI, TDD and FDD schemes. The harvesting fraction is always the
// smallest one that closes the energy budget.

#include "swipt/model.hpp"

namespace swipt {

struct TimeAllocation {
  double alpha = 0.0;  // power transfer
  double eta = 0.0;    // training
  double tau = 0.0;    // feedback (FDD only)

  TimeAllocation() = default;
  TimeAllocation(double alpha, double eta, double tau);
  /// Time left for data, 1 - alpha - eta - tau.
  double data_fraction() const { return 1.0 - alpha - eta - tau; }
};

struct RateSample {
  double rate = 0.0;  // bit/s/Hz
  TimeAllocation allocation;
  bool feasible = false;
};

double alpha_non_csi(const SystemParams& params, const ChannelRealization& ch);
RateSample rate_non_csi(const SystemParams& params, const ChannelRealization& ch);

double alpha_tdd(const SystemParams& params, const ChannelRealization& ch, double eta_t);
RateSample rate_tdd(const SystemParams& params, const ChannelRealization& ch,
                    const EstimateSet& est, double eta_t);

double alpha_fdd(const SystemParams& params, const ChannelRealization& ch,
                 const EstimateSet& est, double tau_f);
RateSample rate_fdd(const SystemParams& params, const ChannelRealization& ch,
                    const EstimateSet& est, double eta_f, double tau_f);

/// Scalar kernels shared with the vectorized estimators. `gain` is ||h||^2,
/// `ut_gain` is ||h_UT||^2 and `bf_gain` the matched-filter gain.
namespace kernel {

double alpha_non_csi(const SystemParams& p, double gain);
double alpha_tdd(const SystemParams& p, double gain, double eta);
double alpha_fdd(const SystemParams& p, double gain, double ut_gain, double tau);

/// Data pre-log factors with alpha at its minimum.
double prelog_non_csi(const SystemParams& p, double gain);
double prelog_tdd(const SystemParams& p, double gain, double eta);
double prelog_fdd(const SystemParams& p, double gain, double ut_gain, double eta, double tau);

}  // namespace kernel

}  // namespace swipt
