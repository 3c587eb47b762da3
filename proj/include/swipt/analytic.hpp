#pragma once

// Closed-form approximations of the optimal training and feedback
// durations, ergodic-rate estimation and exhaustive grid search.

#include <cstdint>
#include <complex>
#include <string_view>
#include <vector>

#include "swipt/model.hpp"
#include "swipt/rng.hpp"

namespace swipt {

enum class Regime { HighSnr, LowSnr, GridSearch };
enum class ConstantMethod { Digamma, MonteCarlo };

std::string_view to_string(Regime r);

/// The regime the command-line tools pick by default: HighSnr above 15 dB.
Regime default_regime(const SystemParams& params);

struct ErgodicEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::int64_t n_samples = 0;
  RngStream seed;
};

struct TrainingOptimum {
  double eta = 0.0;
  double tau = 0.0;
  Regime regime = Regime::HighSnr;
  bool clamped = false;  // a formula value was raised to its symbol-count bound
};

/// E[(1 + L Pe / (beta P ||h||^2)) log2(P ||h||^2 / N0)].
double b1_constant(const SystemParams& params, ConstantMethod method = ConstantMethod::Digamma,
                   std::int64_t n_samples = 1000000, RngStream seed = {});
ErgodicEstimate b1_monte_carlo(const SystemParams& params, std::int64_t n_samples, RngStream seed,
                               int threads = 1);

/// E[log2(P ||h||^2 / N0)].
double b5_constant(const SystemParams& params, ConstantMethod method = ConstantMethod::Digamma,
                   std::int64_t n_samples = 1000000, RngStream seed = {});
ErgodicEstimate b5_monte_carlo(const SystemParams& params, std::int64_t n_samples, RngStream seed,
                               int threads = 1);

/// Approximate optimal TDD training fraction, clamped to [1/Tc, 1 - 1/Tc].
TrainingOptimum eta_tdd_star(const SystemParams& params, Regime regime);

/// Approximate optimal FDD training and feedback fractions, each clamped
/// to at least L/Tc. At low SNR eta is computed first and the clamped
/// value feeds the feedback formula.
TrainingOptimum fdd_star(const SystemParams& params, Regime regime);

/// Analytic optimum for any scheme (non-CSI returns zeros).
TrainingOptimum analytic_optimum(Scheme scheme, const SystemParams& params, Regime regime);

/// Throws PreconditionError unless (eta, tau) respect the scheme's
/// minimum symbol counts and leave time for data.
void check_training(Scheme scheme, const SystemParams& params, double eta, double tau);

/// Monte-Carlo ergodic rate. Samples are drawn in fixed blocks, block b
/// from seed.child(b), and merged in block order.
ErgodicEstimate ergodic_rate(Scheme scheme, const SystemParams& params, double eta, double tau,
                             std::int64_t n_samples, RngStream seed, int threads = 1);

inline constexpr std::int64_t kSampleBlock = 4096;

/// Sufficient statistics of one draw (h, z1, z2), where z1, z2 are the
/// unit-variance noise vectors that ergodic_rate scales into estimates.
struct GramDraw {
  double g = 0.0;   // ||h||^2
  double a1 = 0.0;  // ||z1||^2
  double a2 = 0.0;  // ||z2||^2
  std::complex<double> c1, c2, c12;  // h^H z1, h^H z2, z1^H z2
};

/// Draws reproducing ergodic_rate's random stream, reusable across many
/// (eta, tau) candidates.
struct GramSet {
  int L = 0;
  Scheme scheme = Scheme::NonCsi;
  RngStream seed;
  std::vector<GramDraw> draws;
};

GramSet draw_gram_set(Scheme scheme, int L, std::int64_t n_samples, RngStream seed,
                      int threads = 1);

/// ergodic_rate evaluated on shared draws.
ErgodicEstimate ergodic_rate_paired(Scheme scheme, const SystemParams& params, double eta,
                                    double tau, const GramSet& set);

/// Per-draw rates behind ergodic_rate_paired, in draw order. Lets callers
/// form paired differences and ratios with their own error estimates.
std::vector<double> paired_rate_samples(Scheme scheme, const SystemParams& params, double eta,
                                        double tau, const GramSet& set);

struct GridSpec {
  int coarse_step = 10;  // in symbols, i.e. multiples of 1/Tc
  int fine_step = 1;
  bool refine = true;
};

struct GridResult {
  TrainingOptimum optimum;
  ErgodicEstimate estimate;
  std::int64_t points_evaluated = 0;
  bool on_boundary = false;  // optimum at the edge of the feasible grid
};

/// Exhaustive search over the feasible grid with common random numbers:
/// a coarse scan over the whole range followed by a fine scan within one
/// coarse step of the coarse winner.
GridResult grid_search(Scheme scheme, const SystemParams& params, const GridSpec& grid,
                       const GramSet& set, int threads = 1);
GridResult grid_search(Scheme scheme, const SystemParams& params, const GridSpec& grid,
                       std::int64_t n_samples, RngStream seed, int threads = 1);

}  // namespace swipt
