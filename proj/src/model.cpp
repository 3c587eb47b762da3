#include "swipt/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swipt/errors.hpp"

namespace swipt {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::NonCsi: return "non-csi";
    case Scheme::Tdd: return "tdd";
    case Scheme::Fdd: return "fdd";
  }
  return "?";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "non-csi" || name == "noncsi" || name == "non_csi") return Scheme::NonCsi;
  if (name == "tdd") return Scheme::Tdd;
  if (name == "fdd") return Scheme::Fdd;
  throw PreconditionError("unknown scheme '" + std::string(name) + "'");
}

SystemParams::SystemParams(int L_, double P_, double N0_, double beta_, int Tc_, double Pd_,
                           double Pe_, double Pf_)
    : L(L_), P(P_), N0(N0_), beta(beta_), Tc(Tc_), Pd(Pd_), Pe(Pe_), Pf(Pf_) {
  validate();
}

SystemParams SystemParams::defaults(int L, double snr_db) {
  return SystemParams(L, 1.0, std::pow(10.0, -snr_db / 10.0), 0.5, 1000, 1e-3, 1e-2, 1e-2);
}

void SystemParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (L < 2) throw PreconditionError("L must be at least 2");
  if (!positive(P)) throw PreconditionError("P must be positive");
  if (!positive(N0)) throw PreconditionError("N0 must be positive");
  if (!(beta > 0.0 && beta <= 1.0)) throw PreconditionError("beta must lie in (0, 1]");
  if (Tc < 1) throw PreconditionError("Tc must be a positive integer");
  if (!positive(Pd)) throw PreconditionError("Pd must be positive");
  if (!positive(Pe)) throw PreconditionError("Pe must be positive");
  if (!positive(Pf)) throw PreconditionError("Pf must be positive");
}

double SystemParams::snr_db() const { return 10.0 * std::log10(P / N0); }

SystemParams SystemParams::with_snr_db(double db) const {
  SystemParams out = *this;
  out.N0 = P * std::pow(10.0, -db / 10.0);
  out.validate();
  return out;
}

ChannelRealization::ChannelRealization(CVec v) : h(std::move(v)), gain(norm2(h)) {}

EstimateSet EstimateSet::non_csi() { return EstimateSet{}; }

EstimateSet EstimateSet::tdd(CVec h_hat) {
  EstimateSet e;
  e.scheme = Scheme::Tdd;
  e.h_hat = std::move(h_hat);
  return e;
}

EstimateSet EstimateSet::fdd(CVec h_hat_ut, CVec h_hat_ap) {
  if (h_hat_ut.size() != h_hat_ap.size()) throw PreconditionError("estimate length mismatch");
  EstimateSet e;
  e.scheme = Scheme::Fdd;
  e.h_hat_ut = std::move(h_hat_ut);
  e.h_hat_ap = std::move(h_hat_ap);
  return e;
}

double norm2(std::span<const std::complex<double>> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

std::complex<double> inner(std::span<const std::complex<double>> a,
                           std::span<const std::complex<double>> b) {
  if (a.size() != b.size()) throw PreconditionError("vector length mismatch");
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

ChannelRealization sample_channel(const SystemParams& params, Generator& gen) {
  CVec h(static_cast<std::size_t>(params.L));
  for (auto& z : h) z = gen.complex_normal(1.0);
  return ChannelRealization(std::move(h));
}

ChannelRealization sample_channel(const SystemParams& params, const RngStream& rng) {
  Generator gen(rng);
  return sample_channel(params, gen);
}

double harvested_power(const SystemParams& params, const ChannelRealization& ch) {
  return params.beta * params.P * ch.gain / params.L;
}

double tdd_noise_variance(const SystemParams& p, double eta_t) {
  return p.N0 / (eta_t * p.Tc * p.Pe);
}

double fdd_ut_noise_variance(const SystemParams& p, double eta_f) {
  return p.N0 * p.L / (eta_f * p.Tc * p.P);
}

double fdd_ap_noise_variance(const SystemParams& p, double tau_f) {
  return p.N0 * p.L / (tau_f * p.Tc * p.Pf);
}

namespace {

CVec add_noise(const CVec& base, double variance, Generator& gen) {
  CVec out(base);
  for (auto& z : out) z += gen.complex_normal(variance);
  return out;
}

}  // namespace

EstimateSet sample_tdd_estimate(const ChannelRealization& ch, double eta_t,
                                const SystemParams& params, Generator& gen) {
  if (!(eta_t < 1.0 && eta_t * params.Tc >= 1.0)) {
    throw PreconditionError("TDD training needs eta_t * Tc >= 1 and eta_t < 1");
  }
  return EstimateSet::tdd(add_noise(ch.h, tdd_noise_variance(params, eta_t), gen));
}

EstimateSet sample_tdd_estimate(const ChannelRealization& ch, double eta_t,
                                const SystemParams& params, const RngStream& rng) {
  Generator gen(rng);
  return sample_tdd_estimate(ch, eta_t, params, gen);
}

EstimateSet sample_fdd_estimates(const ChannelRealization& ch, double eta_f, double tau_f,
                                 const SystemParams& params, Generator& gen) {
  if (!(eta_f * params.Tc >= params.L && tau_f * params.Tc >= params.L)) {
    throw PreconditionError("FDD training and feedback need eta_f * Tc >= L and tau_f * Tc >= L");
  }
  if (!(eta_f + tau_f < 1.0)) throw PreconditionError("eta_f + tau_f must be below 1");
  CVec ut = add_noise(ch.h, fdd_ut_noise_variance(params, eta_f), gen);
  CVec ap = add_noise(ut, fdd_ap_noise_variance(params, tau_f), gen);
  return EstimateSet::fdd(std::move(ut), std::move(ap));
}

EstimateSet sample_fdd_estimates(const ChannelRealization& ch, double eta_f, double tau_f,
                                 const SystemParams& params, const RngStream& rng) {
  Generator gen(rng);
  return sample_fdd_estimates(ch, eta_f, tau_f, params, gen);
}

double beamforming_gain(const ChannelRealization& ch, std::span<const std::complex<double>> est) {
  const double n = norm2(est);
  if (!(n > 0.0)) throw PreconditionError("beamforming direction has zero norm");
  const double g = std::norm(inner(ch.h, est)) / n;
  return std::min(g, ch.gain);
}

}  // namespace swipt
