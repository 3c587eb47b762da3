#pragma once

// System parameters, Rayleigh channel draws, harvested power and the
// channel-estimation noise models of the TDD and FDD schemes.

#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "swipt/rng.hpp"

namespace swipt {

using CVec = std::vector<std::complex<double>>;

enum class Scheme { NonCsi, Tdd, Fdd };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view name);

struct SystemParams {
  int L = 3;
  double P = 1.0;
  double N0 = 1e-3;
  double beta = 0.5;
  int Tc = 1000;
  double Pd = 1e-3;
  double Pe = 1e-2;
  double Pf = 1e-2;

  SystemParams() = default;
  SystemParams(int L, double P, double N0, double beta, int Tc, double Pd, double Pe, double Pf);

  /// Defaults of the numerical study with N0 = P / 10^(snr_db/10).
  static SystemParams defaults(int L, double snr_db);

  /// Throws PreconditionError when an invariant is violated.
  void validate() const;
  double snr() const { return P / N0; }
  double snr_db() const;
  SystemParams with_snr_db(double snr_db) const;
};

struct ChannelRealization {
  CVec h;
  double gain = 0.0;  // ||h||^2

  ChannelRealization() = default;
  explicit ChannelRealization(CVec h);
};

struct EstimateSet {
  Scheme scheme = Scheme::NonCsi;
  std::optional<CVec> h_hat;
  std::optional<CVec> h_hat_ut;
  std::optional<CVec> h_hat_ap;

  static EstimateSet non_csi();
  static EstimateSet tdd(CVec h_hat);
  static EstimateSet fdd(CVec h_hat_ut, CVec h_hat_ap);
};

double norm2(std::span<const std::complex<double>> v);
/// a^dagger b
std::complex<double> inner(std::span<const std::complex<double>> a,
                           std::span<const std::complex<double>> b);

ChannelRealization sample_channel(const SystemParams& params, Generator& gen);
ChannelRealization sample_channel(const SystemParams& params, const RngStream& rng);

double harvested_power(const SystemParams& params, const ChannelRealization& ch);

/// Per-entry variance of the TDD estimation error.
double tdd_noise_variance(const SystemParams& params, double eta_t);
/// Per-entry variances of the FDD user-side and AP-side estimation errors.
double fdd_ut_noise_variance(const SystemParams& params, double eta_f);
double fdd_ap_noise_variance(const SystemParams& params, double tau_f);

EstimateSet sample_tdd_estimate(const ChannelRealization& ch, double eta_t,
                                const SystemParams& params, Generator& gen);
EstimateSet sample_tdd_estimate(const ChannelRealization& ch, double eta_t,
                                const SystemParams& params, const RngStream& rng);

EstimateSet sample_fdd_estimates(const ChannelRealization& ch, double eta_f, double tau_f,
                                 const SystemParams& params, Generator& gen);
EstimateSet sample_fdd_estimates(const ChannelRealization& ch, double eta_f, double tau_f,
                                 const SystemParams& params, const RngStream& rng);

/// |h^dagger est|^2 / ||est||^2, the effective gain of matched-filter
/// precoding along `est`.
double beamforming_gain(const ChannelRealization& ch, std::span<const std::complex<double>> est);

}  // namespace swipt
