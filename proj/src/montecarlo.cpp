#include "swipt/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "swipt/analytic.hpp"
#include "swipt/errors.hpp"
#include "swipt/parallel.hpp"
#include "swipt/specfun.hpp"
#include "swipt/stats.hpp"

namespace swipt {

double BernoulliEstimate::std_err() const {
  if (n < 1) return 0.0;
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

BernoulliEstimate make_bernoulli(std::int64_t hits, std::int64_t n) {
  if (n < 1 || hits < 0 || hits > n) throw PreconditionError("need 0 <= hits <= n and n >= 1");
  BernoulliEstimate e;
  e.n = n;
  e.hits = hits;
  e.p_hat = static_cast<double>(hits) / static_cast<double>(n);
  const auto ci = stats::wilson(hits, n);
  e.ci95_low = std::min(ci.low, e.p_hat);
  e.ci95_high = std::max(ci.high, e.p_hat);
  return e;
}

AlphaPolicy AlphaPolicy::fixed(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("fixed alpha must lie in (0, 1)");
  return AlphaPolicy{Mode::Fixed, alpha};
}

namespace {

std::int64_t blocks_for(std::int64_t n) { return (n + kSampleBlock - 1) / kSampleBlock; }

CVec perturbed(const CVec& base, double variance, Generator& gen) {
  CVec out(base);
  for (auto& x : out) x += gen.complex_normal(variance);
  return out;
}

// Counts events over n draws in fixed blocks with one child stream each.
template <class Event>
BernoulliEstimate count_events(std::int64_t n, RngStream seed, int threads, Event&& event) {
  if (n < 1) throw PreconditionError("need at least one sample");
  std::vector<std::int64_t> hits(static_cast<std::size_t>(blocks_for(n)), 0);
  parallel_for(hits.size(), threads, [&](std::size_t b) {
    Generator gen(seed.child(b));
    const std::int64_t first = static_cast<std::int64_t>(b) * kSampleBlock;
    const std::int64_t count = std::min(kSampleBlock, n - first);
    std::int64_t k = 0;
    for (std::int64_t i = 0; i < count; ++i) k += event(gen) ? 1 : 0;
    hits[b] = k;
  });
  std::int64_t total = 0;
  for (auto k : hits) total += k;
  return make_bernoulli(total, n);
}

void require_fixed_allocation(Scheme scheme, const SystemParams& p, const TimeAllocation& a) {
  if (!(a.alpha > 0.0 && a.alpha < 1.0)) throw PreconditionError("alpha must lie in (0, 1)");
  if (!(a.alpha + a.eta + a.tau <= 1.0)) throw PreconditionError("time fractions exceed 1");
  if (scheme != Scheme::NonCsi && !(a.eta > 0.0)) {
    throw PreconditionError("training fraction must be positive");
  }
  (void)p;
}

}  // namespace

BernoulliEstimate mc_energy_shortage(Scheme scheme, const SystemParams& p,
                                     const TimeAllocation& a, std::int64_t n, RngStream seed,
                                     int threads) {
  p.validate();
  require_fixed_allocation(scheme, p, a);
  const double lpd = p.L * p.Pd;
  return count_events(n, seed, threads, [&](Generator& gen) {
    const auto ch = sample_channel(p, gen);
    const double harvested = a.alpha * p.beta * p.P * ch.gain;
    switch (scheme) {
      case Scheme::NonCsi: return harvested < (1.0 - a.alpha) * lpd;
      case Scheme::Tdd: return harvested < a.eta * p.L * p.Pe + (1.0 - a.alpha - a.eta) * lpd;
      case Scheme::Fdd: {
        const CVec ut = perturbed(ch.h, fdd_ut_noise_variance(p, a.eta), gen);
        return harvested < a.tau * p.Pf * norm2(ut) + (1.0 - a.alpha - a.tau) * lpd;
      }
    }
    return false;
  });
}

BernoulliEstimate mc_data_outage(Scheme scheme, const SystemParams& p, AlphaPolicy policy,
                                 double eta, double tau, double target_rate, std::int64_t n,
                                 RngStream seed, int threads) {
  p.validate();
  if (!(target_rate >= 0.0)) throw PreconditionError("target rate must be nonnegative");
  if (scheme == Scheme::NonCsi) eta = tau = 0.0;
  if (scheme == Scheme::Tdd) tau = 0.0;
  if (scheme != Scheme::NonCsi && !(eta > 0.0)) throw PreconditionError("eta must be positive");
  if (scheme == Scheme::Fdd && !(tau > 0.0)) throw PreconditionError("tau must be positive");
  if (!(eta + tau < 1.0)) throw PreconditionError("eta + tau must be below 1");
  const bool fixed = policy.mode == AlphaPolicy::Mode::Fixed;
  if (fixed) require_fixed_allocation(scheme, p, TimeAllocation(policy.alpha, eta, tau));
  const double lpd = p.L * p.Pd;

  return count_events(n, seed, threads, [&](Generator& gen) {
    const auto ch = sample_channel(p, gen);
    if (!fixed) {
      RateSample s;
      switch (scheme) {
        case Scheme::NonCsi: s = rate_non_csi(p, ch); break;
        case Scheme::Tdd:
          s = rate_tdd(p, ch, EstimateSet::tdd(perturbed(ch.h, tdd_noise_variance(p, eta), gen)),
                       eta);
          break;
        case Scheme::Fdd: {
          CVec ut = perturbed(ch.h, fdd_ut_noise_variance(p, eta), gen);
          CVec ap = perturbed(ut, fdd_ap_noise_variance(p, tau), gen);
          s = rate_fdd(p, ch, EstimateSet::fdd(std::move(ut), std::move(ap)), eta, tau);
          break;
        }
      }
      return s.rate < target_rate;
    }

    const double alpha = policy.alpha;
    const double harvested = alpha * p.beta * p.P * ch.gain;
    const double data = 1.0 - alpha - eta - tau;
    double need = 0.0, snr_gain = 0.0;
    switch (scheme) {
      case Scheme::NonCsi:
        need = (1.0 - alpha) * lpd;
        snr_gain = ch.gain / p.L;
        break;
      case Scheme::Tdd: {
        need = eta * p.L * p.Pe + (1.0 - alpha - eta) * lpd;
        const CVec est = perturbed(ch.h, tdd_noise_variance(p, eta), gen);
        snr_gain = beamforming_gain(ch, est);
        break;
      }
      case Scheme::Fdd: {
        const CVec ut = perturbed(ch.h, fdd_ut_noise_variance(p, eta), gen);
        const CVec ap = perturbed(ut, fdd_ap_noise_variance(p, tau), gen);
        need = tau * p.Pf * norm2(ut) + (1.0 - alpha - tau) * lpd;
        snr_gain = beamforming_gain(ch, ap);
        break;
      }
    }
    if (harvested < need) return false;
    const double rate = data > 0.0 ? data * std::log2(1.0 + p.P * snr_gain / p.N0) : 0.0;
    return rate < target_rate;
  });
}

bool DistributionReport::passed(double min_p) const {
  for (const auto& c : laws) {
    if (!(c.p_value > min_p)) return false;
  }
  for (const auto& c : independence) {
    if (!c.passed()) return false;
  }
  return true;
}

namespace {

double ncx2_cdf(int dof, double nu, double x) {
  if (x <= 0.0) return 0.0;
  if (nu <= 0.0) return specfun::reg_gamma_lower(0.5 * dof, 0.5 * x);
  return specfun::noncentral_chi2_cdf(specfun::NoncentralChi2{dof, nu}, x);
}

enum Law {
  kPsi1, kPsi2, kPhi1, kPhi2, kPhi3, kTheta1, kTheta2, kTheta3, kTheta4,
  kTheta5, kTheta6, kTheta7, kTheta8, kTheta9, kLawCount
};

constexpr std::array<const char*, kLawCount> kLawNames = {
    "Psi1", "Psi2", "Phi1", "Phi2", "Phi3", "Theta1", "Theta2", "Theta3", "Theta4",
    "Theta5", "Theta6", "Theta7", "Theta8", "Theta9"};

}  // namespace

DistributionReport mc_distribution_checks(const SystemParams& p, double eta, double tau,
                                          std::int64_t n, RngStream seed, int threads) {
  p.validate();
  if (!(eta > 0.0 && tau > 0.0 && eta + tau < 1.0)) {
    throw PreconditionError("need eta, tau > 0 with eta + tau < 1");
  }
  if (n < 2) throw PreconditionError("need at least two samples");
  const int L = p.L;
  // TDD scales.
  const double vt = tdd_noise_variance(p, eta);
  const double b5 = 1.0 + 1.0 / vt;
  // FDD scales.
  const double s3 = fdd_ut_noise_variance(p, eta);
  const double s4 = fdd_ap_noise_variance(p, tau);
  const double s2 = 1.0 + 1.0 / s3;
  const double s5 = (1.0 + s3) * s4 / (1.0 + s3 + s4);
  const double sap = s3 + s4;

  std::vector<std::vector<double>> pit(kLawCount, std::vector<double>(static_cast<std::size_t>(n)));
  parallel_for(static_cast<std::size_t>(blocks_for(n)), threads, [&](std::size_t b) {
    Generator gen(seed.child(b));
    const std::int64_t first = static_cast<std::int64_t>(b) * kSampleBlock;
    const std::int64_t count = std::min(kSampleBlock, n - first);
    for (std::int64_t i = 0; i < count; ++i) {
      const auto ch = sample_channel(p, gen);
      const double g = ch.gain;
      auto put = [&](Law law, double u) { pit[law][static_cast<std::size_t>(first + i)] = u; };

      // TDD: h_hat = h + w.
      const CVec hh = perturbed(ch.h, vt, gen);
      const double hh2 = norm2(hh);
      const double c1 = std::norm(inner(ch.h, hh));
      const double nu_t = 2.0 * g / vt;
      put(kPsi1, ncx2_cdf(2, nu_t, 2.0 * c1 / (vt * g)));
      put(kPsi2, ncx2_cdf(2 * L, nu_t, 2.0 * hh2 / vt));
      put(kTheta3, ncx2_cdf(2 * L, 0.0, 2.0 * hh2 / (1.0 + vt)));
      const double th1 = 2.0 * b5 * c1 / hh2;
      const double th2 = std::max(0.0, 2.0 * b5 * (g - c1 / hh2));
      put(kTheta1, ncx2_cdf(2, 2.0 * hh2 / (b5 * vt * vt), th1));
      put(kTheta2, ncx2_cdf(2 * L - 2, 0.0, th2));

      // FDD: h_ut = h + w_ut, h_ap = h_ut + w_ap.
      CVec w(ch.h.size());
      for (auto& x : w) x = gen.complex_normal(s3);
      CVec ut(ch.h);
      for (std::size_t k = 0; k < ut.size(); ++k) ut[k] += w[k];
      const CVec ap = perturbed(ut, s4, gen);
      const double ap2 = norm2(ap), ut2 = norm2(ut);
      const double c_hap = std::norm(inner(ch.h, ap));
      const double c_utap = std::norm(inner(ut, ap)) / ap2;
      const double nu_f = 2.0 * g / sap;
      put(kPhi1, ncx2_cdf(2, nu_f, 2.0 * c_hap / (sap * g)));
      put(kPhi2, ncx2_cdf(2 * L, nu_f, 2.0 * ap2 / sap));
      put(kPhi3, ncx2_cdf(2 * L, 2.0 * g / s3, 2.0 * ut2 / s3));
      put(kTheta4, ncx2_cdf(2 * L, 0.0, 2.0 * norm2(w) / s3));
      const double th5 = 2.0 * s2 * c_hap / ap2;
      const double th6 = std::max(0.0, 2.0 * s2 * (g - c_hap / ap2));
      const double k56 = 2.0 / (s2 * s3 * s3);
      put(kTheta5, ncx2_cdf(2, k56 * c_utap, th5));
      put(kTheta6, ncx2_cdf(2 * L - 2, k56 * std::max(0.0, ut2 - c_utap), th6));
      const double th7 = 2.0 * c_utap / s5;
      const double th8 = std::max(0.0, 2.0 * (ut2 - c_utap) / s5);
      put(kTheta7, ncx2_cdf(2, 2.0 * s5 * ap2 / (s4 * s4), th7));
      put(kTheta8, ncx2_cdf(2 * L - 2, 0.0, th8));
      put(kTheta9, ncx2_cdf(2 * L, 0.0, 2.0 * ap2 / (1.0 + s3 + s4)));
    }
  });

  DistributionReport rep;
  rep.n = n;
  for (int law = 0; law < kLawCount; ++law) {
    const auto ks = stats::ks_uniform(pit[law]);
    rep.laws.push_back({kLawNames[law], ks.statistic, ks.p_value});
  }
  const double bound = 4.0 / std::sqrt(static_cast<double>(n));
  auto pair = [&](Law a, Law b) {
    rep.independence.push_back({std::string(kLawNames[a]) + "/" + kLawNames[b],
                                stats::correlation(pit[a], pit[b]), bound});
  };
  pair(kTheta1, kTheta2);
  pair(kTheta5, kTheta6);
  pair(kTheta7, kTheta8);
  return rep;
}

}  // namespace swipt
