#include "swipt/specfun.hpp"

#include <math.h>

#include <algorithm>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "swipt/errors.hpp"

namespace swipt::specfun {
namespace {

constexpr double kEps = 1e-17;
constexpr double kTiny = 1e-300;

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

double lgamma_positive(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

struct GammaPair {
  double lower;
  double upper;
};

// Series for P when x < a + 1, Lentz continued fraction for Q otherwise;
// the other member is the complement.
GammaPair reg_gamma_pair(double a, double x) {
  if (x == 0.0) return {0.0, 1.0};
  if (std::isinf(x)) return {1.0, 0.0};

  const double log_prefactor = a * std::log(x) - x - lgamma_positive(a);
  const long max_iter = 1000 + static_cast<long>(20.0 * std::sqrt(a + x));

  if (x < a + 1.0) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    long n = 1;
    for (; n <= max_iter; ++n) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (term < sum * kEps) break;
    }
    if (n > max_iter) {
      throw NonConvergenceError("reg_gamma: series did not converge for a=" +
                                std::to_string(a));
    }
    const double p = std::min(1.0, sum * std::exp(log_prefactor));
    return {p, 1.0 - p};
  }

  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  long i = 1;
  for (; i <= max_iter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  if (i > max_iter) {
    throw NonConvergenceError("reg_gamma: continued fraction did not converge for a=" +
                              std::to_string(a));
  }
  const double q = std::min(1.0, std::exp(log_prefactor) * h);
  return {1.0 - q, q};
}

void check_gamma_args(double a, double x) {
  require(std::isfinite(a) && a > 0.0, "regularized gamma: a must be > 0");
  require(!std::isnan(x) && x >= 0.0, "regularized gamma: x must be >= 0");
}

// e^{-x} I_n(x) by the asymptotic expansion; valid for x >> n^2.
double bessel_scaled_asymptotic(int n, double x) {
  const double mu = 4.0 * static_cast<double>(n) * static_cast<double>(n);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (k * 8.0 * x);
    if (std::fabs(next) >= std::fabs(term)) break;
    term = next;
    sum += term;
    if (std::fabs(term) < kEps * std::fabs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

// e^{-x} I_n(x) by the power series, summed outward from its largest term.
double bessel_scaled_series(int n, double x) {
  const double half = 0.5 * x;
  const double log_half = std::log(half);
  const double nn = static_cast<double>(n);
  const double k_peak = std::max(0.0, std::floor((-(nn + 2.0) + std::hypot(nn, x)) / 2.0 + 0.5));
  const double log_peak = (2.0 * k_peak + nn) * log_half - lgamma_positive(k_peak + 1.0) -
                          lgamma_positive(k_peak + nn + 1.0) - x;
  const double peak = std::exp(log_peak);
  double sum = peak;

  double term = peak;
  for (double k = k_peak; k < k_peak + 100000.0; k += 1.0) {
    term *= half * half / ((k + 1.0) * (k + nn + 1.0));
    sum += term;
    if (term < kEps * sum) break;
  }
  term = peak;
  for (double k = k_peak; k > 0.0; k -= 1.0) {
    term *= k * (k + nn) / (half * half);
    sum += term;
    if (term < kEps * sum) break;
  }
  return sum;
}

struct MarcumPair {
  double q;
  double p;  // 1 - q
};

// Poisson mixture Q_M(a,b) = sum_k Pois(k; a^2/2) Q(M+k, b^2/2), summed outward
// from the Poisson mode. Above the mean of the mixture the survival sum is
// accumulated directly, below it the complement is, so the small side is
// never obtained by cancellation.
MarcumPair marcum_pair(int m, double a, double b) {
  require(m >= 1, "marcum_q: order M must be >= 1");
  require(!std::isnan(a) && a >= 0.0, "marcum_q: a must be >= 0");
  require(!std::isnan(b) && b >= 0.0, "marcum_q: b must be >= 0");
  if (b == 0.0) return {1.0, 0.0};
  if (std::isinf(b)) return {0.0, 1.0};
  require(std::isfinite(a), "marcum_q: a must be finite");

  const double lambda = 0.5 * a * a;
  const double x = 0.5 * b * b;
  const double md = static_cast<double>(m);
  if (lambda == 0.0) {
    const GammaPair g = reg_gamma_pair(md, x);
    return {g.upper, g.lower};
  }

  const bool upper = x >= md + lambda;
  const double k0 = std::floor(lambda);
  const double n0 = md + k0;
  const GammaPair g0 = reg_gamma_pair(n0, x);
  const double G0 = upper ? g0.upper : g0.lower;
  const double w0 = std::exp(k0 * std::log(lambda) - lambda - lgamma_positive(k0 + 1.0));
  // d(n) = x^n e^{-x} / n! = Q(n+1,x) - Q(n,x)
  const double d0 = std::exp(n0 * std::log(x) - x - lgamma_positive(n0 + 1.0));
  const double max_steps = 1000.0 + 60.0 * std::sqrt(lambda) + lambda;

  double sum = w0 * G0;

  double w = w0, G = G0, d = d0;
  for (double k = k0 + 1.0;; k += 1.0) {
    const double n_prev = md + k - 1.0;
    G = upper ? std::min(1.0, G + d) : std::max(0.0, G - d);
    d *= x / (n_prev + 1.0);
    w *= lambda / k;
    sum += w * G;
    const double r = lambda / (k + 1.0);
    const double bound = upper ? 1.0 : G;
    if (r < 1.0 && (bound * w * r / (1.0 - r) <= kEps * sum || w < kTiny)) break;
    if (k - k0 > max_steps) {
      throw NonConvergenceError("marcum_q: upward Poisson sum did not converge");
    }
  }

  w = w0;
  G = G0;
  d = d0;
  for (double k = k0 - 1.0; k >= 0.0; k -= 1.0) {
    const double n = md + k;
    d *= (n + 1.0) / x;
    G = upper ? std::max(0.0, G - d) : std::min(1.0, G + d);
    w *= (k + 1.0) / lambda;
    sum += w * G;
    const double r = k / lambda;
    const double bound = upper ? G : 1.0;
    if (bound * w * r / (1.0 - r) <= kEps * sum || w < kTiny) break;
  }

  sum = std::clamp(sum, 0.0, 1.0);
  return upper ? MarcumPair{sum, 1.0 - sum} : MarcumPair{1.0 - sum, sum};
}

void require_even(const NoncentralChi2& dist) {
  require(dist.dof % 2 == 0, "noncentral chi-squared: only even degrees of freedom are supported");
}

}  // namespace

Tolerance::Tolerance(double abs, double rel) : abs_tol(abs), rel_tol(rel) {
  require(abs >= 0.0 && rel >= 0.0, "Tolerance: components must be nonnegative");
  require(abs > 0.0 || rel > 0.0, "Tolerance: at least one component must be positive");
}

NoncentralChi2::NoncentralChi2(int k, double nu) : dof(k), noncentrality(nu) {
  require(k >= 1, "NoncentralChi2: dof must be >= 1");
  require(std::isfinite(nu) && nu >= 0.0, "NoncentralChi2: noncentrality must be >= 0");
}

double ln_gamma(double x) {
  require(std::isfinite(x) && x > 0.0, "ln_gamma: x must be > 0");
  return lgamma_positive(x);
}

double reg_gamma_lower(double a, double x) {
  check_gamma_args(a, x);
  return reg_gamma_pair(a, x).lower;
}

double reg_gamma_upper(double a, double x) {
  check_gamma_args(a, x);
  return reg_gamma_pair(a, x).upper;
}

double bessel_i_scaled(int n, double x) {
  require(n >= 0, "bessel_i: order must be >= 0");
  require(!std::isnan(x) && x >= 0.0, "bessel_i: x must be >= 0");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (std::isinf(x)) return 0.0;
  const double nn = static_cast<double>(n);
  if (x > 25.0 + 2.0 * nn * nn) return bessel_scaled_asymptotic(n, x);
  return bessel_scaled_series(n, x);
}

double bessel_i(int n, double x) {
  const double scaled = bessel_i_scaled(n, x);
  if (scaled == 0.0) return 0.0;
  const double log_value = x + std::log(scaled);
  if (log_value > std::log(DBL_MAX)) {
    throw std::overflow_error("bessel_i: result overflows double at x=" + std::to_string(x));
  }
  return x < 700.0 ? std::exp(x) * scaled : std::exp(log_value);
}

namespace {
std::atomic<double> g_marcum_perturbation{0.0};
}

void testing::set_marcum_perturbation(double relative) { g_marcum_perturbation = relative; }
double testing::marcum_perturbation() { return g_marcum_perturbation; }

double marcum_q(int m, double a, double b) {
  const double q = marcum_pair(m, a, b).q;
  const double eps = g_marcum_perturbation.load(std::memory_order_relaxed);
  return eps == 0.0 ? q : q * (1.0 + eps);
}

double marcum_q_complement(int m, double a, double b) { return marcum_pair(m, a, b).p; }

double noncentral_chi2_sf(const NoncentralChi2& dist, double x) {
  require_even(dist);
  require(!std::isnan(x), "noncentral_chi2_sf: x is NaN");
  if (x <= 0.0) return 1.0;
  return marcum_q(dist.dof / 2, std::sqrt(dist.noncentrality), std::sqrt(x));
}

double noncentral_chi2_cdf(const NoncentralChi2& dist, double x) {
  require_even(dist);
  require(!std::isnan(x), "noncentral_chi2_cdf: x is NaN");
  if (x <= 0.0) return 0.0;
  return marcum_q_complement(dist.dof / 2, std::sqrt(dist.noncentrality), std::sqrt(x));
}

namespace {

template <class Sf>
double invert_survival(Sf&& sf, double start, double tail) {
  double lo = 0.0;
  double hi = std::max(start, 1.0);
  while (sf(hi) > tail) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw NonConvergenceError("survival inverse: bracket search diverged");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (sf(mid) > tail ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

double noncentral_chi2_isf(const NoncentralChi2& dist, double tail) {
  require_even(dist);
  require(tail > 0.0 && tail < 1.0, "noncentral_chi2_isf: tail must be in (0,1)");
  const double mean = dist.dof + dist.noncentrality;
  const double sd = std::sqrt(2.0 * (dist.dof + 2.0 * dist.noncentrality));
  return invert_survival([&](double x) { return noncentral_chi2_sf(dist, x); }, mean + 4.0 * sd,
                         tail);
}

double chi2_isf(double dof, double tail) {
  require(dof > 0.0, "chi2_isf: dof must be > 0");
  require(tail > 0.0 && tail < 1.0, "chi2_isf: tail must be in (0,1)");
  return invert_survival([&](double x) { return reg_gamma_pair(0.5 * dof, 0.5 * x).upper; },
                         dof + 4.0 * std::sqrt(2.0 * dof), tail);
}

double digamma(double x) {
  require(std::isfinite(x) && x > 0.0, "digamma: x must be > 0");
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Bernoulli-number tail: -sum B_{2k} / (2k x^{2k}), k = 1..7
  const double series =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 -
                                              inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
  return shift + std::log(x) - 0.5 * inv - series;
}

}  // namespace swipt::specfun
