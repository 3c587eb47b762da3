#include <cmath>
#include <random>

#include "doctest.h"
#include "swipt/analytic.hpp"
#include "swipt/errors.hpp"
#include "swipt/montecarlo.hpp"
#include "swipt/outage.hpp"
#include "swipt/schemes.hpp"
#include "swipt/specfun.hpp"

using namespace swipt;

namespace {

// Binomial 4-sigma band around the closed form plus its own error.
bool agrees(const OutageResult& r, const BernoulliEstimate& e) {
  const double p = r.probability;
  const double sd = std::sqrt(std::max(p * (1.0 - p), 1e-12) / static_cast<double>(e.n));
  return std::fabs(e.p_hat - p) <= 4.0 * sd + r.est_error;
}

double alpha_at_mean_fdd(const SystemParams& p, double eta, double tau, double scale) {
  const double ut = p.L * (1.0 + fdd_ut_noise_variance(p, eta));
  return scale * kernel::alpha_fdd(p, p.L, ut, tau);
}

}  // namespace

TEST_CASE("non-CSI energy shortage") {
  const auto p = SystemParams::defaults(3, 30.0);
  const auto r = energy_shortage_non_csi(p, 0.5);
  CHECK(r.probability == doctest::Approx(3.5838388152832271e-8).epsilon(1e-12));
  CHECK(r.est_error == 0.0);
  CHECK(energy_shortage_non_csi(p, 1.0 - 1e-12).probability < 1e-40);
  CHECK(energy_shortage_non_csi(p, 1e-9).probability == doctest::Approx(1.0).epsilon(1e-12));
  for (double n0 : {1.0, 1e-3, 1e-8}) {
    auto q = p;
    q.N0 = n0;
    CHECK(energy_shortage_non_csi(q, 0.3).probability == energy_shortage_non_csi(p, 0.3).probability);
  }
  CHECK_THROWS_AS(energy_shortage_non_csi(p, 0.0), PreconditionError);
  CHECK_THROWS_AS(energy_shortage_non_csi(p, 1.0), PreconditionError);
}

TEST_CASE("TDD energy shortage collapses to the non-CSI form") {
  auto p = SystemParams::defaults(3, 10.0);
  CHECK(energy_shortage_tdd(p, 0.01, 0.0).probability ==
        energy_shortage_non_csi(p, 0.01).probability);
  CHECK(energy_shortage_tdd(p, 0.01, 1e-14).probability ==
        doctest::Approx(energy_shortage_non_csi(p, 0.01).probability).epsilon(1e-10));
  p.Pe = p.Pd;
  for (double eta : {0.01, 0.2, 0.5}) {
    CHECK(energy_shortage_tdd(p, 0.02, eta).probability ==
          doctest::Approx(energy_shortage_non_csi(p, 0.02).probability).epsilon(1e-13));
  }
  CHECK_THROWS_AS(energy_shortage_tdd(p, 0.6, 0.5), PreconditionError);
}

TEST_CASE("FDD energy shortage tends to the non-CSI form as tau -> 0") {
  for (double db : {0.0, 30.0}) {
    const auto p = SystemParams::defaults(3, db);
    for (double alpha : {0.002, 0.004, 0.02}) {
      const auto r = energy_shortage_fdd(p, alpha, 0.003, 1e-12);
      CHECK(r.converged);
      CHECK(std::fabs(r.probability - energy_shortage_non_csi(p, alpha).probability) < 1e-8);
    }
  }
}

TEST_CASE("FDD energy shortage rejects a degenerate denominator") {
  const auto p = SystemParams::defaults(3, 10.0);
  // alpha beta P = 0.005 = tau Pf
  CHECK_THROWS_WITH_AS(energy_shortage_fdd(p, 0.01, 0.003, 0.5), doctest::Contains("degenerate"),
                       PreconditionError);
  CHECK_THROWS_AS(energy_shortage_fdd(p, 0.01, 0.003, 0.6), PreconditionError);
}

TEST_CASE("FDD energy shortage stays in range on a 5x5x5 sweep") {
  const auto p = SystemParams::defaults(3, 20.0);
  const double alphas[] = {0.003, 0.01, 0.05, 0.2, 0.6};
  const double etas[] = {0.003, 0.01, 0.05, 0.1, 0.2};
  const double taus[] = {0.0, 0.003, 0.01, 0.05, 0.1};
  for (double a : alphas) {
    for (double e : etas) {
      for (double t : taus) {
        if (a * p.beta * p.P <= t * p.Pf) continue;
        const auto r = energy_shortage_fdd(p, a, e, t);
        CHECK(r.probability >= 0.0);
        CHECK(r.probability <= 1.0);
        CHECK(r.est_error >= 0.0);
      }
    }
  }
}

TEST_CASE("energy shortage is nonincreasing in alpha") {
  const auto p = SystemParams::defaults(3, 10.0);
  double prev_n = 2, prev_t = 2, prev_f = 2;
  for (int i = 0; i < 10; ++i) {
    const double a = 0.002 * std::pow(1.6, i);
    const auto n = energy_shortage_non_csi(p, a);
    const auto t = energy_shortage_tdd(p, a, 0.01);
    const auto f = energy_shortage_fdd(p, a, 0.003, 0.003);
    CHECK(n.probability <= prev_n);
    CHECK(t.probability <= prev_t);
    CHECK(f.probability <= prev_f + f.est_error);
    prev_n = n.probability;
    prev_t = t.probability;
    prev_f = f.probability;
  }
}

TEST_CASE("non-CSI data outage") {
  const auto p = SystemParams::defaults(3, 10.0);
  const auto r = data_outage_non_csi(p, 0.5, 6.0);
  const double expect =
      specfun::reg_gamma_lower(3, 1228.5) - specfun::reg_gamma_lower(3, 0.006);
  CHECK(r.probability == doctest::Approx(expect).epsilon(1e-14));
  CHECK(r.probability == doctest::Approx(1.0 - 3.5838388152832271e-8).epsilon(1e-14));
  CHECK(data_outage_non_csi(p, 0.5, 0.0).probability == 0.0);

  // threshold on ||h||^2 from energy exceeds the rate threshold
  const auto hi = SystemParams::defaults(3, 30.0);
  const auto empty = data_outage_non_csi(hi, 0.5, 0.5);
  CHECK(empty.probability == 0.0);
  CHECK(empty.branch == "empty event");
}

TEST_CASE("TDD data outage limits and branch continuity") {
  const auto p = SystemParams::defaults(3, 20.0);
  const double alpha = 0.02, eta = 0.016;
  CHECK(data_outage_tdd(p, alpha, eta, 0.0).probability == 0.0);
  CHECK(data_outage_tdd(p, alpha, eta, 1e-9).probability < 1e-12);

  const double b4 = (eta * p.L * p.Pe + (1 - alpha - eta) * p.L * p.Pd) / (alpha * p.beta * p.P);
  const double r_eq = (1 - alpha - eta) * std::log2(1 + b4 * p.P / p.N0);
  const auto below = data_outage_tdd(p, alpha, eta, r_eq * (1 - 1e-12));
  const auto at = data_outage_tdd(p, alpha, eta, r_eq);
  const auto above = data_outage_tdd(p, alpha, eta, r_eq * (1 + 1e-12));
  CHECK(below.branch == "b3 < b4");
  CHECK(above.branch == "b3 >= b4");
  CHECK(below.probability > 1e-3);
  CHECK(std::fabs(below.probability - above.probability) <
        below.est_error + above.est_error + 1e-9);
  CHECK(std::fabs(at.probability - above.probability) < at.est_error + above.est_error + 1e-9);

  CHECK_THROWS_AS(data_outage_tdd(p, 0.5, 0.5, 6.0), PreconditionError);
}

TEST_CASE("TDD data outage matches Monte Carlo") {
  const auto p = SystemParams::defaults(3, 10.0);
  const auto opt = analytic_optimum(Scheme::Tdd, p, default_regime(p));
  for (double alpha : {0.004, 0.0065}) {
    const auto r = data_outage_tdd(p, alpha, opt.eta, 6.0);
    const auto e = mc_data_outage(Scheme::Tdd, p, AlphaPolicy::fixed(alpha), opt.eta, 0.0, 6.0,
                                  1000000, RngStream{71, 0}, 4);
    INFO("alpha " << alpha << " closed " << r.probability << " mc " << e.p_hat);
    CHECK(agrees(r, e));
  }
}

TEST_CASE("theta7 marginal matches its negative-binomial mixture") {
  for (int L : {2, 3, 6}) {
    for (double c : {0.05, 1.0, 12.0}) {
      auto series = [&](double x) {
        const double q = c / (1.0 + c);
        double sum = 0.0;
        for (int k = 0; k < 4000; ++k) {
          const double lw = std::lgamma(k + L) - std::lgamma(k + 1.0) - std::lgamma(L) -
                            L * std::log1p(c) + k * std::log(q);
          const double lf = k * std::log(x) - 0.5 * x - (k + 1) * std::log(2.0) - std::lgamma(k + 1.0);
          sum += std::exp(lw + lf);
        }
        return sum;
      };
      for (double x : {0.01, 0.5, 2.0, 7.0, 25.0, 80.0}) {
        const double h = fdd_theta7_density(L, c, x);
        const double s = series(x);
        if (s < 1e-200) continue;
        CHECK(h == doctest::Approx(s).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("FDD data outage: regions, limits and Monte Carlo") {
  const auto p = SystemParams::defaults(3, 10.0);
  const auto opt = analytic_optimum(Scheme::Fdd, p, default_regime(p));
  CHECK(data_outage_fdd(p, 0.01, opt.eta, opt.tau, 0.0).probability == 0.0);
  CHECK(data_outage_fdd(p, 0.01, opt.eta, opt.tau, 1e-9).probability < 1e-9);

  const double alpha = alpha_at_mean_fdd(p, opt.eta, opt.tau, 2.0);
  const auto r = data_outage_fdd(p, alpha, opt.eta, opt.tau, 6.0);
  CHECK(r.converged);
  CHECK(r.branch.find("three regions") != std::string::npos);
  const auto e = mc_data_outage(Scheme::Fdd, p, AlphaPolicy::fixed(alpha), opt.eta, opt.tau, 6.0,
                                1000000, RngStream{72, 0}, 4);
  INFO("closed " << r.probability << " mc " << e.p_hat);
  CHECK(agrees(r, e));

  // At 30 dB with a generous alpha the rate threshold sits below the energy
  // threshold, so only the first region contributes.
  const auto q = SystemParams::defaults(3, 30.0);
  const auto oq = analytic_optimum(Scheme::Fdd, q, default_regime(q));
  const double aq = alpha_at_mean_fdd(q, oq.eta, oq.tau, 10.0);
  const auto k = fdd_outage_constants(q, aq, oq.eta, oq.tau, 6.0);
  CHECK(k.b7 <= k.b8);
  const auto rq = data_outage_fdd(q, aq, oq.eta, oq.tau, 6.0);
  CHECK(rq.branch.find("b7 <= b8") != std::string::npos);
  const auto eq = mc_data_outage(Scheme::Fdd, q, AlphaPolicy::fixed(aq), oq.eta, oq.tau, 6.0,
                                 1000000, RngStream{73, 0}, 4);
  INFO("closed " << rq.probability << " mc " << eq.p_hat);
  CHECK(agrees(rq, eq));
}

TEST_CASE("FDD Monte-Carlo integration fallback agrees with the quadrature") {
  const auto p = SystemParams::defaults(3, 20.0);
  const auto opt = analytic_optimum(Scheme::Fdd, p, default_regime(p));
  const double alpha = alpha_at_mean_fdd(p, opt.eta, opt.tau, 10.0);
  const auto quad = data_outage_fdd(p, alpha, opt.eta, opt.tau, 6.0);
  QuadratureSpec spec;
  spec.force_mc = true;
  spec.mc_samples = 20000;
  const auto mc = data_outage_fdd(p, alpha, opt.eta, opt.tau, 6.0, spec);
  CHECK(mc.branch.find("monte-carlo") != std::string::npos);
  CHECK(mc.est_error > 0.0);
  CHECK(std::fabs(mc.probability - quad.probability) < 4.0 * mc.est_error + quad.est_error);
  // same seed, same answer
  CHECK(data_outage_fdd(p, alpha, opt.eta, opt.tau, 6.0, spec).probability == mc.probability);
}

TEST_CASE("all closed forms stay in [0, 1] on 100 random configurations") {
  std::mt19937_64 gen(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  QuadratureSpec fast(1e-7, 30, 1e-9);
  for (int i = 0; i < 100; ++i) {
    const int L = 2 + static_cast<int>(unit(gen) * 5);
    const auto p = SystemParams::defaults(L, -5.0 + 40.0 * unit(gen));
    const double alpha = std::pow(10.0, -3.0 + 2.5 * unit(gen));
    const double eta = std::max(double(L) / p.Tc, 0.3 * unit(gen) * (1 - alpha));
    const double tau = std::max(double(L) / p.Tc, 0.3 * unit(gen) * (1 - alpha - eta));
    const double rate = 8.0 * unit(gen);
    INFO("config " << i << " L " << L << " alpha " << alpha << " eta " << eta << " tau " << tau);
    std::vector<OutageResult> rs = {energy_shortage_non_csi(p, alpha),
                                    energy_shortage_tdd(p, alpha, eta),
                                    data_outage_non_csi(p, alpha, rate),
                                    data_outage_tdd(p, alpha, eta, rate, fast)};
    if (alpha * p.beta * p.P > tau * p.Pf) rs.push_back(energy_shortage_fdd(p, alpha, eta, tau, fast));
    if (i % 5 == 0) rs.push_back(data_outage_fdd(p, alpha, eta, tau, rate, fast));
    for (const auto& r : rs) {
      CHECK(r.probability >= 0.0);
      CHECK(r.probability <= 1.0);
      CHECK(r.est_error >= 0.0);
      CHECK(std::isfinite(r.probability));
    }
  }
}
