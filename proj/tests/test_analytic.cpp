#include <cmath>

#include "doctest.h"
#include "swipt/analytic.hpp"
#include "swipt/errors.hpp"

using namespace swipt;

// Reference constants below were evaluated independently in 30-digit
// arithmetic from the digamma closed forms.

TEST_CASE("B1 and B5 closed forms") {
  const auto p = SystemParams::defaults(3, 30.0);
  CHECK(b1_constant(p) == doctest::Approx(11.614352663166890).epsilon(1e-12));
  CHECK(b5_constant(p) == doctest::Approx(11.297080668718665).epsilon(1e-12));
  CHECK(b5_constant(SystemParams::defaults(3, 0.0)) == doctest::Approx(1.3312963840565780).epsilon(1e-12));

  auto tiny = p;
  tiny.Pe = 1e-300;
  CHECK(b1_constant(tiny) == doctest::Approx(b5_constant(tiny)).epsilon(1e-14));

  auto scaled = p;
  scaled.P = 8.0;
  CHECK(b5_constant(scaled) - b5_constant(p) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("B1 and B5 Monte-Carlo agree with the closed forms") {
  for (int L : {2, 3, 6}) {
    const auto p = SystemParams::defaults(L, 30.0);
    const auto b5 = b5_monte_carlo(p, 1000000, RngStream{21, std::uint64_t(L)});
    CHECK(std::fabs(b5.mean - b5_constant(p)) < 4.0 * b5.std_err);
    if (L > 2) {  // 1/||h||^2 has infinite variance at L = 2
      const auto b1 = b1_monte_carlo(p, 1000000, RngStream{22, std::uint64_t(L)});
      CHECK(std::fabs(b1.mean - b1_constant(p)) < 4.0 * b1.std_err);
    }
  }
  const auto p = SystemParams::defaults(3, 30.0);
  CHECK(b1_constant(p, ConstantMethod::MonteCarlo, 200000, RngStream{1, 0}) ==
        b1_monte_carlo(p, 200000, RngStream{1, 0}).mean);
}

TEST_CASE("TDD training optimum") {
  const auto p = SystemParams::defaults(3, 30.0);
  const auto hi = eta_tdd_star(p, Regime::HighSnr);
  CHECK(hi.eta == doctest::Approx(4.3165362705210828e-3).epsilon(1e-11));
  CHECK_FALSE(hi.clamped);
  CHECK(hi.tau == 0.0);

  // Scaling N0, P and Pe together leaves both B1 and the optimum unchanged.
  auto s = p;
  s.N0 *= 7.0;
  s.P *= 7.0;
  s.Pe *= 7.0;
  CHECK(eta_tdd_star(s, Regime::HighSnr).eta == doctest::Approx(hi.eta).epsilon(1e-13));

  // Low-SNR formula at 0 dB, written out.
  const auto q = SystemParams::defaults(3, 0.0);
  const double x = 2.0 * 0.5 * 1000 * 0.01 / (3.0 * 1.0 * 0.51);
  CHECK(eta_tdd_star(q, Regime::LowSnr).eta ==
        doctest::Approx(1.0 / (1000 * 0.01) * (-1 + std::sqrt(1 + x - 1.0 / 3))).epsilon(1e-13));

  double prev = 1.0;
  for (double db : {-10.0, -20.0, -30.0, -40.0, -60.0}) {
    const auto o = eta_tdd_star(SystemParams::defaults(3, db), Regime::LowSnr);
    CHECK(o.eta <= prev);
    prev = o.eta;
  }
  const auto floor = eta_tdd_star(SystemParams::defaults(3, -60.0), Regime::LowSnr);
  CHECK(floor.eta == doctest::Approx(1e-3));
  CHECK(floor.clamped);
  CHECK_THROWS_AS(eta_tdd_star(SystemParams::defaults(3, -10.0), Regime::HighSnr), PreconditionError);
}

TEST_CASE("FDD training and feedback optimum") {
  const auto p = SystemParams::defaults(3, 30.0);
  const auto hi = fdd_star(p, Regime::HighSnr);
  CHECK(hi.tau == doctest::Approx(7.5060305126443262e-3).epsilon(1e-11));
  // The formula's eta (0.76 symbols) is raised to L symbols.
  CHECK(hi.eta == doctest::Approx(3e-3));
  CHECK(hi.clamped);

  auto longer = p;
  longer.Tc = 100000;
  const auto free = fdd_star(longer, Regime::HighSnr);
  CHECK_FALSE(free.clamped);
  CHECK(free.eta / free.tau == doctest::Approx(std::sqrt((1 + 0.01 / 0.5) * 0.01)).epsilon(1e-14));

  // Low SNR at 0 dB: eta first, then tau from the (clamped) eta.
  const auto q = SystemParams::defaults(3, 0.0);
  const auto lo = fdd_star(q, Regime::LowSnr);
  const double eta = 0.01 * 3 / (1000 * 0.51) * (-1 + std::sqrt(1 + 1000 * 0.51 / (0.01 * 3)));
  const double xx = 3.0 / (eta * 1000);
  const double tau = 3.0 * (-1 + std::sqrt(1 + 4 * 0.5 * (0.5 / 0.01 + 1 + xx) / (xx * xx))) /
                     (2 * 1000 * (0.5 + 0.01 + 0.01 * xx));
  CHECK(lo.eta == doctest::Approx(eta).epsilon(1e-13));
  CHECK(lo.tau == doctest::Approx(tau).epsilon(1e-13));
  CHECK_FALSE(lo.clamped);

  // As N0 grows the feedback fraction falls to its floor, while the training
  // formula c (sqrt(1 + 1/c') - 1) tends to one half rather than zero.
  const auto far = fdd_star(SystemParams::defaults(3, -80.0), Regime::LowSnr);
  CHECK(far.tau == doctest::Approx(3e-3));
  CHECK(far.eta == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("ergodic rate contracts") {
  const auto p = SystemParams::defaults(3, 30.0);
  const RngStream seed{5, 0};
  const auto eta = eta_tdd_star(p, Regime::HighSnr).eta;
  const auto tdd = ergodic_rate(Scheme::Tdd, p, eta, 0.0, 100000, seed);
  CHECK(tdd.n_samples == 100000);
  CHECK(tdd.seed == seed);

  // Genie: unit pre-log and perfect beamforming on the same channels.
  const auto set = draw_gram_set(Scheme::NonCsi, 3, 100000, RngStream{6, 0});
  double genie = 0;
  for (const auto& d : set.draws) genie += std::log2(1 + d.g / p.N0);
  genie /= set.draws.size();
  CHECK(tdd.mean < genie);

  const auto a = ergodic_rate(Scheme::NonCsi, p, 0.0, 0.0, 50000, seed);
  const auto b = ergodic_rate(Scheme::NonCsi, p, 0.3, 0.2, 50000, seed);
  CHECK(a.mean == b.mean);

  const auto again = ergodic_rate(Scheme::Tdd, p, eta, 0.0, 100000, seed, 3);
  CHECK(again.mean == tdd.mean);
  CHECK(again.std_err == tdd.std_err);

  CHECK_THROWS_AS(ergodic_rate(Scheme::Tdd, p, 0.0005, 0.0, 10, seed), PreconditionError);
  CHECK_THROWS_AS(ergodic_rate(Scheme::Fdd, p, 0.002, 0.01, 10, seed), PreconditionError);
  CHECK_THROWS_AS(ergodic_rate(Scheme::Fdd, p, 0.6, 0.5, 10, seed), PreconditionError);
}

TEST_CASE("paired evaluation reproduces ergodic_rate on the same stream") {
  for (double db : {0.0, 30.0}) {
    const auto p = SystemParams::defaults(3, db);
    const RngStream seed{77, 1};
    const auto set = draw_gram_set(Scheme::Fdd, 3, 20000, seed);
    const auto tdd_set = draw_gram_set(Scheme::Tdd, 3, 20000, seed);
    for (auto [eta, tau] : {std::pair{0.004, 0.0}, {0.05, 0.0}}) {
      const auto direct = ergodic_rate(Scheme::Tdd, p, eta, tau, 20000, seed);
      CHECK(ergodic_rate_paired(Scheme::Tdd, p, eta, tau, tdd_set).mean ==
            doctest::Approx(direct.mean).epsilon(1e-12));
    }
    for (auto [eta, tau] : {std::pair{0.003, 0.0075}, {0.02, 0.1}}) {
      const auto direct = ergodic_rate(Scheme::Fdd, p, eta, tau, 20000, seed);
      const auto paired = ergodic_rate_paired(Scheme::Fdd, p, eta, tau, set);
      CHECK(paired.mean == doctest::Approx(direct.mean).epsilon(1e-12));
      CHECK(paired.std_err == doctest::Approx(direct.std_err).epsilon(1e-9));
    }
    const auto nc = ergodic_rate(Scheme::NonCsi, p, 0, 0, 20000, seed);
    CHECK(ergodic_rate_paired(Scheme::NonCsi, p, 0, 0, draw_gram_set(Scheme::NonCsi, 3, 20000, seed)).mean ==
          doctest::Approx(nc.mean).epsilon(1e-12));
    CHECK_THROWS_AS(ergodic_rate_paired(Scheme::Fdd, p, 0.01, 0.01, tdd_set), PreconditionError);
  }
}

TEST_CASE("grid search finds an interior optimum close to the analytic one") {
  const auto p = SystemParams::defaults(3, 30.0);
  const auto set = draw_gram_set(Scheme::Fdd, 3, 100000, RngStream{8, 0});
  const auto tdd = grid_search(Scheme::Tdd, p, GridSpec{}, set);
  CHECK_FALSE(tdd.on_boundary);
  CHECK(tdd.optimum.regime == Regime::GridSearch);
  const auto star = eta_tdd_star(p, Regime::HighSnr);
  const double zeta = ergodic_rate_paired(Scheme::Tdd, p, star.eta, 0, set).mean / tdd.estimate.mean;
  CHECK(zeta > 0.9);
  CHECK(zeta <= 1.0 + 1e-6);

  const auto fdd = grid_search(Scheme::Fdd, p, GridSpec{}, set);
  CHECK(fdd.optimum.eta >= 3e-3);
  CHECK(fdd.optimum.tau >= 3e-3);
  CHECK(tdd.estimate.mean >= fdd.estimate.mean);

  // Fine scan never does worse than the coarse scan alone.
  const auto coarse = grid_search(Scheme::Tdd, p, GridSpec{10, 1, false}, set);
  CHECK(tdd.estimate.mean >= coarse.estimate.mean);
  CHECK(grid_search(Scheme::Tdd, p, GridSpec{}, set, 3).estimate.mean == tdd.estimate.mean);
}
