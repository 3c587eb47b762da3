#pragma once

// Energy-shortage and data-outage probabilities at a fixed time allocation,
// from their closed forms. The non-CSI and TDD shortage forms are exact
// incomplete-gamma expressions; the others are evaluated by nested adaptive
// quadrature over chi-squared variables whose semi-infinite axes are cut
// where the neglected probability mass falls below `tail_cut`.

#include <cstdint>
#include <string>

#include "swipt/model.hpp"
#include "swipt/rng.hpp"

namespace swipt {

struct QuadratureSpec {
  double abs_tol = 1e-9;
  int max_depth = 30;
  double tail_cut = 1e-10;
  // Monte-Carlo integration used by the FDD data outage when its nested
  // quadrature does not converge (or when force_mc is set).
  std::int64_t mc_samples = 200000;
  RngStream mc_seed{0x5eed, 0};
  bool force_mc = false;

  QuadratureSpec() = default;
  QuadratureSpec(double abs_tol, int max_depth, double tail_cut);
  void validate() const;
};

struct OutageResult {
  double probability = 0.0;
  double est_error = 0.0;  // quadrature error bound, or MC standard error
  std::string branch;
  bool converged = true;
  std::int64_t evaluations = 0;
};

OutageResult energy_shortage_non_csi(const SystemParams& params, double alpha_n);
OutageResult energy_shortage_tdd(const SystemParams& params, double alpha_t, double eta_t);
OutageResult energy_shortage_fdd(const SystemParams& params, double alpha_f, double eta_f,
                                 double tau_f, const QuadratureSpec& spec = {});

OutageResult data_outage_non_csi(const SystemParams& params, double alpha_n, double target_rate);
OutageResult data_outage_tdd(const SystemParams& params, double alpha_t, double eta_t,
                             double target_rate, const QuadratureSpec& spec = {});
OutageResult data_outage_fdd(const SystemParams& params, double alpha_f, double eta_f,
                             double tau_f, double target_rate, const QuadratureSpec& spec = {});

/// Scheme dispatch for the two metrics. `tau` is ignored except for FDD.
OutageResult energy_shortage(Scheme scheme, const SystemParams& params, double alpha, double eta,
                             double tau, const QuadratureSpec& spec = {});
OutageResult data_outage(Scheme scheme, const SystemParams& params, double alpha, double eta,
                         double tau, double target_rate, const QuadratureSpec& spec = {});

/// Harvesting fraction that closes the energy budget at the mean channel,
/// ||h||^2 = L (and ||h_UT||^2 = L (1 + sigma3) for FDD). A natural scale
/// for fixed-alpha sweeps.
double mean_channel_alpha(Scheme scheme, const SystemParams& params, double eta, double tau);

/// Constants shared by the FDD data-outage terms.
struct FddOutageConstants {
  double sigma2, sigma3, sigma4, sigma5;
  double b7, b8, b9;
  double threshold;  // theta7 + theta8 split, 2 (b7 - b8) / (b9 sigma5)
};
FddOutageConstants fdd_outage_constants(const SystemParams& params, double alpha_f, double eta_f,
                                        double tau_f, double target_rate);

/// Marginal density of theta7 after integrating out theta9 ~ chi^2_{2L}
/// with theta7 | theta9 ~ noncentral chi^2_2((1 + sigma3) theta9 / sigma4).
double fdd_theta7_density(int L, double c, double theta7, double tail_cut = 1e-12);

}  // namespace swipt
