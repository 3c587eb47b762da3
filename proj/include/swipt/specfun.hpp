#pragma once

// Special functions behind the outage and rate closed forms: log-gamma,
// regularized incomplete gamma, modified Bessel I_n (plain and
// exponentially scaled), generalized Marcum Q, the noncentral chi-squared
// survival function for even degrees of freedom, and digamma.
//
// Every function is pure and reentrant. Domain violations throw
// std::domain_error; results that cannot be represented throw
// std::overflow_error.

namespace swipt::specfun {

struct Tolerance {
  double abs_tol = 0.0;
  double rel_tol = 0.0;

  Tolerance() = default;
  Tolerance(double abs, double rel);
};

/// Noncentral chi-squared law with `dof` degrees of freedom and
/// noncentrality `noncentrality`. A zero noncentrality is the central law.
struct NoncentralChi2 {
  int dof = 2;
  double noncentrality = 0.0;

  NoncentralChi2() = default;
  NoncentralChi2(int dof, double noncentrality);
};

double ln_gamma(double x);

/// P(a, x) = gamma(a, x) / Gamma(a).
double reg_gamma_lower(double a, double x);

/// Q(a, x) = Gamma(a, x) / Gamma(a).
double reg_gamma_upper(double a, double x);

/// Modified Bessel function of the first kind, integer order.
double bessel_i(int n, double x);

/// e^{-x} I_n(x); finite for every x >= 0.
double bessel_i_scaled(int n, double x);

/// Generalized Marcum Q-function Q_M(a, b).
double marcum_q(int m, double a, double b);

/// 1 - Q_M(a, b), evaluated without cancellation when Q_M is close to 1.
double marcum_q_complement(int m, double a, double b);

/// P(X > x) for X ~ dist. Only even `dof` is supported.
double noncentral_chi2_sf(const NoncentralChi2& dist, double x);

/// P(X <= x) for X ~ dist. Only even `dof` is supported.
double noncentral_chi2_cdf(const NoncentralChi2& dist, double x);

/// Point x with P(X > x) = tail for X ~ dist (even dof).
double noncentral_chi2_isf(const NoncentralChi2& dist, double tail);

/// Point x with P(X > x) = tail for X ~ chi^2_dof (any positive dof).
double chi2_isf(double dof, double tail);

double digamma(double x);

namespace testing {

/// Scales every marcum_q result by (1 + relative). Negative control for the
/// validation suite; leave at zero otherwise.
void set_marcum_perturbation(double relative);
double marcum_perturbation();

}  // namespace testing

}  // namespace swipt::specfun
