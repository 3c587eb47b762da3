#include "swipt/outage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "swipt/errors.hpp"
#include "swipt/quadrature.hpp"
#include "swipt/schemes.hpp"
#include "swipt/specfun.hpp"
#include "swipt/stats.hpp"

namespace swipt {

namespace sf = specfun;

QuadratureSpec::QuadratureSpec(double a, int d, double t) : abs_tol(a), max_depth(d), tail_cut(t) {
  validate();
}

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0)) throw PreconditionError("abs_tol must be positive");
  if (max_depth < 1) throw PreconditionError("max_depth must be positive");
  if (!(tail_cut > 0.0 && tail_cut < 1.0)) throw PreconditionError("tail_cut must lie in (0, 1)");
  if (mc_samples < 2) throw PreconditionError("mc_samples must be at least 2");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Density of chi^2 with 2k degrees of freedom.
double chi2_pdf(int k, double x) {
  if (x <= 0.0) return k == 1 ? 0.5 : 0.0;
  return std::exp((k - 1) * std::log(x) - 0.5 * x - k * std::numbers::ln2 - std::lgamma(k));
}

// Density of noncentral chi^2 with 2 degrees of freedom, in jointly scaled
// form: exp(-(x + nu)/2) I0(sqrt(nu x)) = exp(-(sqrt x - sqrt nu)^2 / 2) e^{-z} I0(z).
double ncx2_2_pdf(double nu, double x) {
  if (x < 0.0) return 0.0;
  const double d = std::sqrt(x) - std::sqrt(nu);
  return 0.5 * std::exp(-0.5 * d * d) * sf::bessel_i_scaled(0, std::sqrt(nu * x));
}

// P(X > y) for X ~ noncentral chi^2_{2m}(nu).
double ncx2_sf(int m, double nu, double y) {
  if (y <= 0.0) return 1.0;
  if (std::isinf(y)) return 0.0;
  return sf::noncentral_chi2_sf(sf::NoncentralChi2{2 * m, nu}, y);
}

// P(X < y), accurate on both sides of the median.
double ncx2_cdf(int m, double nu, double y) {
  if (y <= 0.0) return 0.0;
  if (std::isinf(y)) return 1.0;
  return sf::noncentral_chi2_cdf(sf::NoncentralChi2{2 * m, nu}, y);
}

// P(lo <= X < hi), taking whichever side of the law is small.
double ncx2_between(int m, double nu, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  const double s_lo = ncx2_sf(m, nu, lo);
  if (s_lo < 0.5) return std::max(0.0, s_lo - ncx2_sf(m, nu, hi));
  const sf::NoncentralChi2 d{2 * m, nu};
  const double c_hi = std::isinf(hi) ? 1.0 : sf::noncentral_chi2_cdf(d, hi);
  const double c_lo = lo <= 0.0 ? 0.0 : sf::noncentral_chi2_cdf(d, lo);
  return std::max(0.0, c_hi - c_lo);
}

double pow2m1(double x) { return std::expm1(x * std::numbers::ln2); }

void require_fraction(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) throw PreconditionError(std::string(what) + " must lie in (0, 1)");
}

quad::Options level_options(const QuadratureSpec& spec, double abs_tol) {
  quad::Options o;
  o.abs_tol = abs_tol;
  o.rel_tol = 1e-10;
  o.max_depth = spec.max_depth;
  o.max_intervals = 2000;
  return o;
}

struct Tracker {
  bool converged = true;
  double worst_inner = 0.0;
  std::int64_t evaluations = 0;

  void note(const quad::Result& r) {
    converged = converged && r.converged;
    worst_inner = std::max(worst_inner, r.abs_error);
    evaluations += r.evaluations;
  }
};

OutageResult finish(double p, double err, std::string branch, bool converged, std::int64_t evals) {
  OutageResult out;
  out.probability = std::clamp(p, 0.0, 1.0);
  out.est_error = err;
  out.branch = std::move(branch);
  out.converged = converged;
  out.evaluations = evals;
  return out;
}

void throw_if_unconverged(const OutageResult& r, const char* what) {
  if (!r.converged) {
    throw NonConvergenceError(std::string(what) + ": quadrature did not reach tolerance",
                              r.est_error);
  }
}

}  // namespace

OutageResult energy_shortage_non_csi(const SystemParams& p, double alpha) {
  p.validate();
  require_fraction(alpha, "alpha_n");
  const double x = (1.0 - alpha) * p.L * p.Pd / (alpha * p.beta * p.P);
  return finish(sf::reg_gamma_lower(p.L, x), 0.0, "closed form", true, 1);
}

OutageResult energy_shortage_tdd(const SystemParams& p, double alpha, double eta) {
  p.validate();
  require_fraction(alpha, "alpha_t");
  if (!(eta >= 0.0 && alpha + eta <= 1.0)) {
    throw PreconditionError("energy_shortage_tdd needs eta >= 0 and alpha_t + eta_t <= 1");
  }
  const double x = (eta * p.L * p.Pe + (1.0 - alpha - eta) * p.L * p.Pd) / (alpha * p.beta * p.P);
  return finish(sf::reg_gamma_lower(p.L, x), 0.0, "closed form", true, 1);
}

OutageResult energy_shortage_fdd(const SystemParams& p, double alpha, double eta, double tau,
                                 const QuadratureSpec& spec) {
  p.validate();
  spec.validate();
  require_fraction(alpha, "alpha_f");
  if (!(eta > 0.0 && tau >= 0.0 && alpha + eta + tau <= 1.0)) {
    throw PreconditionError("energy_shortage_fdd needs eta > 0, tau >= 0, alpha + eta + tau <= 1");
  }
  const double d = alpha * p.beta * p.P - tau * p.Pf;
  if (!(d > 0.0)) {
    throw PreconditionError("degenerate denominator: alpha_f * beta * P <= tau_f * Pf");
  }
  const double s1sq = p.N0 * p.L / (2.0 * eta * p.Tc * p.P);
  const double r1sq = 2.0 * tau * tau * p.Pf * p.Pf / (d * d);
  const double r2sq = 2.0 * tau * p.Pf / d + r1sq;
  const double r3sq = 2.0 * (1.0 - alpha - tau) * p.L * p.Pd / d;

  // 1 - E[Q_L(...)] taken as E[1 - Q_L(...)] so small probabilities keep
  // their relative accuracy.
  auto integrand = [&](double theta) {
    const double nu = r1sq * s1sq * theta;
    const double x = r2sq * s1sq * theta + r3sq;
    return ncx2_cdf(p.L, nu, x) * chi2_pdf(p.L, theta);
  };
  const double top = sf::chi2_isf(2.0 * p.L, spec.tail_cut);
  const double cuts[] = {2.0 * p.L - 2.0, 2.0 * p.L};
  const auto r = quad::integrate(integrand, 0.0, top, level_options(spec, spec.abs_tol), cuts);
  auto out = finish(r.value, r.abs_error + spec.tail_cut, "single integral over theta4",
                    r.converged, r.evaluations);
  throw_if_unconverged(out, "energy_shortage_fdd");
  return out;
}

OutageResult data_outage_non_csi(const SystemParams& p, double alpha, double rate) {
  p.validate();
  require_fraction(alpha, "alpha_n");
  if (!(rate >= 0.0)) throw PreconditionError("target rate must be nonnegative");
  const double lo = (1.0 - alpha) * p.L * p.Pd / (alpha * p.beta * p.P);
  const double hi = p.N0 * p.L / p.P * pow2m1(rate / (1.0 - alpha));
  if (!(lo < hi)) return finish(0.0, 0.0, "empty event", true, 0);
  const double lower_lo = sf::reg_gamma_lower(p.L, lo);
  const double value = lower_lo < 0.5 ? sf::reg_gamma_lower(p.L, hi) - lower_lo
                                      : sf::reg_gamma_upper(p.L, lo) - sf::reg_gamma_upper(p.L, hi);
  return finish(value, 0.0, "closed form", true, 2);
}

OutageResult data_outage_tdd(const SystemParams& p, double alpha, double eta, double rate,
                             const QuadratureSpec& spec) {
  p.validate();
  spec.validate();
  require_fraction(alpha, "alpha_t");
  if (!(eta > 0.0 && alpha + eta < 1.0)) {
    throw PreconditionError("data_outage_tdd needs eta_t > 0 and alpha_t + eta_t < 1");
  }
  if (!(rate >= 0.0)) throw PreconditionError("target rate must be nonnegative");
  const double b3 = p.N0 / p.P * pow2m1(rate / (1.0 - alpha - eta));
  const double b4 = (eta * p.L * p.Pe + (1.0 - alpha - eta) * p.L * p.Pd) / (alpha * p.beta * p.P);
  const double b6 = p.N0 / (eta * p.Tc * p.Pe);
  const double b5 = 1.0 + 1.0 / b6;
  const double c3 = 2.0 * b5 * b3, c4 = 2.0 * b5 * b4;
  const bool second_case = b3 >= b4;
  std::string branch = second_case ? "b3 >= b4" : "b3 < b4";
  if (rate == 0.0) return finish(0.0, 0.0, branch, true, 0);

  Tracker tr;
  const auto inner_opt = level_options(spec, 0.1 * spec.abs_tol);
  const double upper = std::min(c3, c4);
  const int m = p.L - 1;
  auto inner = [&](double theta3) {
    const double nu = theta3 / b6;
    auto f = [&](double theta1) {
      return ncx2_2_pdf(nu, theta1) * sf::reg_gamma_upper(m, 0.5 * (c4 - theta1));
    };
    const double sd = std::sqrt(4.0 + 4.0 * nu);
    const double cuts[] = {nu - 5 * sd, nu - sd, nu, nu + sd, nu + 5 * sd, c4 - 2.0 * m};
    const auto r = quad::integrate(f, 0.0, upper, inner_opt, cuts);
    tr.note(r);
    double v = r.value;
    if (second_case) v += ncx2_between(1, nu, c4, c3);
    return v;
  };
  const double top = sf::chi2_isf(2.0 * p.L, spec.tail_cut);
  const double cuts[] = {2.0 * p.L - 2.0, 2.0 * p.L};
  const auto r = quad::integrate([&](double t) { return chi2_pdf(p.L, t) * inner(t); }, 0.0, top,
                                 level_options(spec, spec.abs_tol), cuts);
  auto out = finish(r.value, r.abs_error + tr.worst_inner + spec.tail_cut, branch,
                    r.converged && tr.converged, r.evaluations + tr.evaluations);
  throw_if_unconverged(out, "data_outage_tdd");
  return out;
}

FddOutageConstants fdd_outage_constants(const SystemParams& p, double alpha, double eta,
                                        double tau, double rate) {
  FddOutageConstants k{};
  k.sigma3 = p.N0 * p.L / (eta * p.P * p.Tc);
  k.sigma2 = 1.0 + 1.0 / k.sigma3;
  k.sigma4 = p.N0 * p.L / (tau * p.Pf * p.Tc);
  k.sigma5 = (1.0 + k.sigma3) * k.sigma4 / (1.0 + k.sigma3 + k.sigma4);
  k.b7 = p.N0 / p.P * pow2m1(rate / (1.0 - alpha - eta - tau));
  k.b8 = (1.0 - alpha - tau) * p.L * p.Pd / (alpha * p.beta * p.P);
  k.b9 = tau * p.Pf / (alpha * p.beta * p.P);
  k.threshold = 2.0 * (k.b7 - k.b8) / (k.b9 * k.sigma5);
  return k;
}

double fdd_theta7_density(int L, double c, double theta7, double tail_cut) {
  auto f = [&](double t9) { return chi2_pdf(L, t9) * ncx2_2_pdf(c * t9, theta7); };
  const double top = sf::chi2_isf(2.0 * L, tail_cut);
  const double cuts[] = {2.0 * L - 2.0, theta7 / c};
  quad::Options o;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-11;
  return quad::integrate(f, 0.0, top, o, cuts).value;
}

namespace {

// Probability, given (theta7, theta8), that theta5 < 2 sigma2 b7 while
// theta5 + theta6 >= X, with theta5 ~ ncx2_2(mu5) and theta6 ~ ncx2_{2L-2}(mu6).
// With P5 = P(theta5 < c7) and S = P(theta5 + theta6 < X) the answer lies in
// [P5 - S, min(P5, 1 - S)], which settles most points without the theta5
// integral when the laws are sharp.
struct FddInner {
  const FddOutageConstants& k;
  int L;
  quad::Options opt;
  double shortcut;  // largest error accepted from the bounds above
  Tracker& tr;

  double mu(double theta) const { return k.sigma5 / (k.sigma2 * k.sigma3 * k.sigma3) * theta; }
  double c7() const { return 2.0 * k.sigma2 * k.b7; }
  double x_of(double theta7, double theta8) const {
    return 2.0 * k.sigma2 * k.b8 + k.sigma2 * k.b9 * k.sigma5 * (theta7 + theta8);
  }

  double operator()(double theta7, double theta8) const {
    const double mu5 = mu(theta7), mu6 = mu(theta8);
    const double c7v = c7();
    const double x = x_of(theta7, theta8);
    const double p5 = ncx2_cdf(1, mu5, c7v);
    if (p5 <= shortcut) return 0.0;
    const double s_sf = ncx2_sf(L, mu5 + mu6, x);
    if (s_sf <= shortcut) return 0.0;
    const double s = s_sf < 0.5 ? 1.0 - s_sf : ncx2_cdf(L, mu5 + mu6, x);
    if (s <= shortcut) return p5;

    // sqrt(theta5) is within 9 of sqrt(mu5) outside a mass of 3e-18.
    const double root = std::sqrt(mu5);
    const double lower = root > 9.0 ? (root - 9.0) * (root - 9.0) : 0.0;
    const double upper = std::min({x, c7v, (root + 9.0) * (root + 9.0)});
    double v = 0.0;
    if (upper > lower) {
      auto f = [&](double t5) { return ncx2_2_pdf(mu5, t5) * ncx2_sf(L - 1, mu6, x - t5); };
      const double sd = 2.0 * root + 1.0;
      const double step = x - (2.0 * L - 2.0 + mu6);
      const double cuts[] = {mu5 - 3 * sd, mu5, mu5 + 3 * sd, step};
      const auto r = quad::integrate(f, lower, upper, opt, cuts);
      tr.note(r);
      v = r.value;
    }
    if (x < c7v) v += ncx2_between(1, mu5, x, c7v);
    return v;
  }

  // One-draw estimate of the same probability: theta5 drawn from its law.
  double sample(double theta7, double theta8, Generator& gen) const {
    const double mu5 = mu(theta7);
    const double z = gen.normal() + std::sqrt(mu5);
    const double w = gen.normal();
    const double t5 = z * z + w * w;
    if (t5 >= c7()) return 0.0;
    return ncx2_sf(L - 1, mu(theta8), x_of(theta7, theta8) - t5);
  }
};

}  // namespace

OutageResult data_outage_fdd(const SystemParams& p, double alpha, double eta, double tau,
                             double rate, const QuadratureSpec& spec) {
  p.validate();
  spec.validate();
  require_fraction(alpha, "alpha_f");
  if (!(eta > 0.0 && tau > 0.0 && alpha + eta + tau < 1.0)) {
    throw PreconditionError("data_outage_fdd needs eta, tau > 0 and alpha + eta + tau < 1");
  }
  if (!(rate >= 0.0)) throw PreconditionError("target rate must be nonnegative");
  const auto k = fdd_outage_constants(p, alpha, eta, tau, rate);
  const std::string regions = k.b7 <= k.b8 ? "b7 <= b8 (regions 2, 3 empty)" : "three regions";
  if (rate == 0.0) return finish(0.0, 0.0, regions, true, 0);

  const double c = (1.0 + k.sigma3) / k.sigma4;  // theta7 | theta9 noncentrality per unit theta9
  const int L = p.L;
  Tracker tr;
  const double shortcut = 1e-3 * spec.abs_tol;
  const FddInner inner{k, L, level_options(spec, 0.01 * spec.abs_tol), shortcut, tr};

  if (!spec.force_mc) {
    const auto mid_opt = level_options(spec, 0.1 * spec.abs_tol);
    const double top8 = sf::chi2_isf(2.0 * L - 2.0, spec.tail_cut);
    // Where the mean of theta5 + theta6 crosses X, and where the mean of
    // theta5 crosses c7; G steps sharply there when sigma3 is small.
    const double per_theta = inner.mu(1.0);
    const double slope = k.sigma2 * k.b9 * k.sigma5;
    const double s_step = per_theta != slope ? (2.0 * k.sigma2 * k.b8 - 2.0 * L) / (per_theta - slope) : -1.0;
    const double t7_step = (inner.c7() - 2.0) / per_theta;
    auto middle = [&](double theta7) {
      auto g = [&](double t8) {
        const double w = chi2_pdf(L - 1, t8);
        return w * top8 <= shortcut ? 0.0 : w * inner(theta7, t8);
      };
      const double cuts[] = {k.threshold - theta7, s_step - theta7, 2.0 * L - 4.0, 2.0 * L - 2.0};
      const auto r = quad::integrate(g, 0.0, top8, mid_opt, cuts);
      tr.note(r);
      return r.value;
    };
    const double top9 = sf::chi2_isf(2.0 * L, 0.5 * spec.tail_cut);
    const double top7 = sf::noncentral_chi2_isf(sf::NoncentralChi2{2, c * top9}, 0.5 * spec.tail_cut);
    const double mean7 = 2.0 + 2.0 * L * c;
    const double cuts[] = {k.threshold, s_step, t7_step, 0.5 * mean7, mean7, 2.0 * mean7};
    const auto r = quad::integrate(
        [&](double t7) {
          const double w = fdd_theta7_density(L, c, t7);
          return w * top7 <= shortcut ? 0.0 : w * middle(t7);
        },
        0.0, top7,
        level_options(spec, spec.abs_tol), cuts);
    if (r.converged && tr.converged) {
      return finish(r.value, r.abs_error + tr.worst_inner + 3.0 * (spec.tail_cut + shortcut),
                    regions + ", nested quadrature", true, r.evaluations + tr.evaluations);
    }
  }

  // Monte-Carlo integration: theta9, theta7 | theta9, theta8 and theta5 are
  // drawn from their laws and the theta6 tail is kept exact.
  Generator gen(spec.mc_seed);
  stats::Moments m;
  auto chi2 = [&](int dof) {
    double s = 0.0;
    for (int i = 0; i < dof; ++i) {
      const double z = gen.normal();
      s += z * z;
    }
    return s;
  };
  for (std::int64_t i = 0; i < spec.mc_samples; ++i) {
    const double t9 = chi2(2 * L);
    const double z = gen.normal() + std::sqrt(c * t9);
    const double w = gen.normal();
    const double t7 = z * z + w * w;
    const double t8 = chi2(2 * L - 2);
    m.add(inner.sample(t7, t8, gen));
  }
  return finish(m.mean(), m.std_err(), regions + ", monte-carlo integration", true,
                spec.mc_samples);
}

OutageResult energy_shortage(Scheme scheme, const SystemParams& p, double alpha, double eta,
                             double tau, const QuadratureSpec& spec) {
  switch (scheme) {
    case Scheme::NonCsi: return energy_shortage_non_csi(p, alpha);
    case Scheme::Tdd: return energy_shortage_tdd(p, alpha, eta);
    case Scheme::Fdd: return energy_shortage_fdd(p, alpha, eta, tau, spec);
  }
  throw PreconditionError("unknown scheme");
}

OutageResult data_outage(Scheme scheme, const SystemParams& p, double alpha, double eta,
                         double tau, double target_rate, const QuadratureSpec& spec) {
  switch (scheme) {
    case Scheme::NonCsi: return data_outage_non_csi(p, alpha, target_rate);
    case Scheme::Tdd: return data_outage_tdd(p, alpha, eta, target_rate, spec);
    case Scheme::Fdd: return data_outage_fdd(p, alpha, eta, tau, target_rate, spec);
  }
  throw PreconditionError("unknown scheme");
}

double mean_channel_alpha(Scheme scheme, const SystemParams& p, double eta, double tau) {
  p.validate();
  const double g = p.L;
  switch (scheme) {
    case Scheme::NonCsi: return kernel::alpha_non_csi(p, g);
    case Scheme::Tdd: return kernel::alpha_tdd(p, g, eta);
    case Scheme::Fdd:
      return kernel::alpha_fdd(p, g, g * (1.0 + fdd_ut_noise_variance(p, eta)), tau);
  }
  throw PreconditionError("unknown scheme");
}

}  // namespace swipt
