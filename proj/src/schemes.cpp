#include "swipt/schemes.hpp"

#include <cmath>
#include <string>

#include "swipt/errors.hpp"

namespace swipt {

TimeAllocation::TimeAllocation(double a, double e, double t) : alpha(a), eta(e), tau(t) {
  if (!(a >= 0.0 && e >= 0.0 && t >= 0.0)) {
    throw PreconditionError("time fractions must be nonnegative");
  }
  if (!(a + e + t <= 1.0)) throw PreconditionError("time fractions must sum to at most 1");
}

namespace kernel {

double alpha_non_csi(const SystemParams& p, double gain) {
  const double lpd = p.L * p.Pd;
  return lpd / (p.beta * p.P * gain + lpd);
}

double alpha_tdd(const SystemParams& p, double gain, double eta) {
  const double lpd = p.L * p.Pd;
  return (eta * p.L * p.Pe - eta * lpd + lpd) / (p.beta * p.P * gain + lpd);
}

double alpha_fdd(const SystemParams& p, double gain, double ut_gain, double tau) {
  const double lpd = p.L * p.Pd;
  return (tau * p.Pf * ut_gain - tau * lpd + lpd) / (p.beta * p.P * gain + lpd);
}

double prelog_non_csi(const SystemParams& p, double gain) { return 1.0 - alpha_non_csi(p, gain); }

double prelog_tdd(const SystemParams& p, double gain, double eta) {
  const double bpg = p.beta * p.P * gain;
  return ((1.0 - eta) * bpg - eta * p.L * p.Pe) / (bpg + p.L * p.Pd);
}

double prelog_fdd(const SystemParams& p, double gain, double ut_gain, double eta, double tau) {
  const double bpg = p.beta * p.P * gain;
  return ((1.0 - eta - tau) * bpg - tau * p.Pf * ut_gain - eta * p.L * p.Pd) /
         (bpg + p.L * p.Pd);
}

}  // namespace kernel

namespace {

void require_gain(const ChannelRealization& ch) {
  if (!(ch.gain > 0.0)) throw PreconditionError("channel gain must be positive");
}

const CVec& require_estimate(const std::optional<CVec>& v, Scheme want, Scheme have) {
  if (want != have || !v) {
    throw PreconditionError("estimate set is for scheme '" + std::string(to_string(have)) +
                            "', expected '" + std::string(to_string(want)) + "'");
  }
  return *v;
}

RateSample make_sample(double prelog, double log_term, double alpha, double eta, double tau) {
  RateSample s;
  s.allocation.alpha = alpha;
  s.allocation.eta = eta;
  s.allocation.tau = tau;
  s.feasible = prelog > 0.0 && alpha > 0.0;
  s.rate = s.feasible ? prelog * log_term : 0.0;
  return s;
}

}  // namespace

double alpha_non_csi(const SystemParams& params, const ChannelRealization& ch) {
  require_gain(ch);
  return kernel::alpha_non_csi(params, ch.gain);
}

RateSample rate_non_csi(const SystemParams& params, const ChannelRealization& ch) {
  if (!(ch.gain > 0.0)) return RateSample{};
  const double alpha = kernel::alpha_non_csi(params, ch.gain);
  const double log_term = std::log2(1.0 + params.P * ch.gain / (params.N0 * params.L));
  return make_sample(1.0 - alpha, log_term, alpha, 0.0, 0.0);
}

double alpha_tdd(const SystemParams& params, const ChannelRealization& ch, double eta_t) {
  require_gain(ch);
  if (!(eta_t > 0.0 && eta_t < 1.0)) throw PreconditionError("eta_t must lie in (0, 1)");
  return kernel::alpha_tdd(params, ch.gain, eta_t);
}

RateSample rate_tdd(const SystemParams& params, const ChannelRealization& ch,
                    const EstimateSet& est, double eta_t) {
  const CVec& h_hat = require_estimate(est.h_hat, Scheme::Tdd, est.scheme);
  if (!(ch.gain > 0.0)) return RateSample{};
  const double alpha = kernel::alpha_tdd(params, ch.gain, eta_t);
  const double prelog = kernel::prelog_tdd(params, ch.gain, eta_t);
  const double log_term = std::log2(1.0 + params.P * beamforming_gain(ch, h_hat) / params.N0);
  return make_sample(prelog, log_term, alpha, eta_t, 0.0);
}

double alpha_fdd(const SystemParams& params, const ChannelRealization& ch,
                 const EstimateSet& est, double tau_f) {
  require_gain(ch);
  const CVec& ut = require_estimate(est.h_hat_ut, Scheme::Fdd, est.scheme);
  return kernel::alpha_fdd(params, ch.gain, norm2(ut), tau_f);
}

RateSample rate_fdd(const SystemParams& params, const ChannelRealization& ch,
                    const EstimateSet& est, double eta_f, double tau_f) {
  const CVec& ut = require_estimate(est.h_hat_ut, Scheme::Fdd, est.scheme);
  const CVec& ap = require_estimate(est.h_hat_ap, Scheme::Fdd, est.scheme);
  if (!(ch.gain > 0.0)) return RateSample{};
  const double ut_gain = norm2(ut);
  const double alpha = kernel::alpha_fdd(params, ch.gain, ut_gain, tau_f);
  const double prelog = kernel::prelog_fdd(params, ch.gain, ut_gain, eta_f, tau_f);
  const double log_term = std::log2(1.0 + params.P * beamforming_gain(ch, ap) / params.N0);
  return make_sample(prelog, log_term, alpha, eta_f, tau_f);
}

}  // namespace swipt
