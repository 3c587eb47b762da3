#include <cmath>

#include "doctest.h"
#include "swipt/errors.hpp"
#include "swipt/schemes.hpp"

using namespace swipt;

namespace {

ChannelRealization with_gain(int L, double gain) {
  CVec h(L);
  h[0] = std::sqrt(gain);
  return ChannelRealization(h);
}

}  // namespace

TEST_CASE("non-CSI harvesting fraction and rate") {
  auto p = SystemParams::defaults(3, 30.0);
  const auto ch = with_gain(3, 3.0);
  CHECK(alpha_non_csi(p, ch) == doctest::Approx(0.003 / 1.503).epsilon(1e-14));
  CHECK(alpha_non_csi(p, with_gain(3, 1e12)) < 1e-14);
  p.Pd = 1e-300;
  CHECK(alpha_non_csi(p, ch) < 1e-290);

  p = SystemParams::defaults(3, 10.0);
  const auto r = rate_non_csi(p, ch);
  CHECK(r.feasible);
  CHECK(r.rate == doctest::Approx((1.0 - 0.003 / 1.503) * std::log2(11.0)).epsilon(1e-14));
  CHECK(r.rate == doctest::Approx(3.4526).epsilon(1e-4));
  CHECK_FALSE(rate_non_csi(p, ChannelRealization(CVec(3))).feasible);
  CHECK(rate_non_csi(p, ChannelRealization(CVec(3))).rate == 0.0);
  p.N0 = 1e12;
  CHECK(rate_non_csi(p, ch).rate < 1e-11);
  CHECK_THROWS_AS(alpha_non_csi(p, ChannelRealization(CVec(3))), PreconditionError);
}

TEST_CASE("TDD harvesting fraction") {
  auto p = SystemParams::defaults(3, 30.0);
  const auto ch = with_gain(3, 3.0);
  CHECK(alpha_tdd(p, ch, 0.01) == doctest::Approx((3e-4 - 3e-5 + 3e-3) / 1.503).epsilon(1e-14));
  CHECK(alpha_tdd(p, ch, 1e-12) == doctest::Approx(alpha_non_csi(p, ch)).epsilon(1e-10));
  p.Pe = p.Pd;
  for (double eta : {0.001, 0.1, 0.7}) {
    CHECK(alpha_tdd(p, ch, eta) == doctest::Approx(alpha_non_csi(p, ch)).epsilon(1e-14));
  }
}

TEST_CASE("TDD rate") {
  const auto p = SystemParams::defaults(3, 20.0);
  const auto ch = with_gain(3, 2.0);
  const auto perfect = rate_tdd(p, ch, EstimateSet::tdd(ch.h), 0.01);
  CHECK(perfect.feasible);
  const double prelog = ((1 - 0.01) * 0.5 * 2.0 - 0.01 * 3 * 1e-2) / (0.5 * 2.0 + 3e-3);
  CHECK(perfect.rate == doctest::Approx(prelog * std::log2(1.0 + 2.0 / p.N0)).epsilon(1e-13));

  const auto weak = with_gain(3, 1e-4);
  const auto r = rate_tdd(p, weak, EstimateSet::tdd(weak.h), 0.9);
  CHECK_FALSE(r.feasible);
  CHECK(r.rate == 0.0);

  CHECK_THROWS_AS(rate_tdd(p, ch, EstimateSet::fdd(ch.h, ch.h), 0.01), PreconditionError);
  CHECK_THROWS_AS(rate_tdd(p, ch, EstimateSet::non_csi(), 0.01), PreconditionError);
}

TEST_CASE("TDD rate against an independent scalar evaluation") {
  const auto p = SystemParams::defaults(3, 30.0);
  const double eta = 0.0043;
  Generator gen(RngStream{42, 0});
  const auto ch = sample_channel(p, gen);
  const auto est = sample_tdd_estimate(ch, eta, p, gen);
  const auto& e = *est.h_hat;

  // Written out component by component on purpose.
  double g = 0, ee = 0, re = 0, im = 0;
  for (int l = 0; l < 3; ++l) {
    const double hr = ch.h[l].real(), hi = ch.h[l].imag(), er = e[l].real(), ei = e[l].imag();
    g += hr * hr + hi * hi;
    ee += er * er + ei * ei;
    re += hr * er + hi * ei;
    im += hr * ei - hi * er;
  }
  const double harvest = 0.5 * 1.0 * g / 3.0;
  const double alpha = (eta * 1e-2 + (1 - eta) * 1e-3) / (harvest + 1e-3);
  const double expected = (1 - alpha - eta) * std::log2(1 + (re * re + im * im) / ee / p.N0);
  const auto r = rate_tdd(p, ch, est, eta);
  CHECK(r.allocation.alpha == doctest::Approx(alpha).epsilon(1e-13));
  CHECK(r.rate == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("FDD harvesting fraction and rate") {
  auto p = SystemParams::defaults(3, 30.0);
  const auto ch = with_gain(3, 3.0);
  const auto est = EstimateSet::fdd(ch.h, ch.h);
  CHECK(alpha_fdd(p, ch, est, 0.01) == doctest::Approx((3e-4 - 3e-5 + 3e-3) / 1.503).epsilon(1e-14));
  CHECK(alpha_fdd(p, ch, est, 1e-12) == doctest::Approx(alpha_non_csi(p, ch)).epsilon(1e-10));
  // P_F ||h_UT||^2 = L P_D makes feedback cost the same as decoding.
  CVec ut(3);
  ut[0] = std::sqrt(p.L * p.Pd / p.Pf);
  const auto matched = EstimateSet::fdd(ut, ut);
  for (double tau : {0.003, 0.2}) {
    CHECK(alpha_fdd(p, ch, matched, tau) == doctest::Approx(alpha_non_csi(p, ch)).epsilon(1e-13));
  }

  const auto r = rate_fdd(p, ch, est, 0.01, 0.01);
  CHECK(r.feasible);
  CHECK(r.rate == doctest::Approx((1 - r.allocation.alpha - 0.02) * std::log2(1 + 3.0 / p.N0)).epsilon(1e-13));
  CHECK_FALSE(rate_fdd(p, ch, est, 0.6, 0.5).feasible);
  CHECK(rate_fdd(p, ch, est, 0.6, 0.5).rate == 0.0);
  CHECK_THROWS_AS(rate_fdd(p, ch, EstimateSet::tdd(ch.h), 0.01, 0.01), PreconditionError);
  CHECK_THROWS_AS(alpha_fdd(p, ch, EstimateSet::tdd(ch.h), 0.01), PreconditionError);
}

TEST_CASE("FDD rate against an independent scalar evaluation") {
  const auto p = SystemParams::defaults(3, 10.0);
  const double eta = 0.012, tau = 0.007;
  Generator gen(RngStream{42, 1});
  const auto ch = sample_channel(p, gen);
  const auto est = sample_fdd_estimates(ch, eta, tau, p, gen);
  double g = 0, ut = 0, aa = 0;
  std::complex<double> c = 0;
  for (int l = 0; l < 3; ++l) {
    g += std::norm(ch.h[l]);
    ut += std::norm((*est.h_hat_ut)[l]);
    aa += std::norm((*est.h_hat_ap)[l]);
    c += std::conj(ch.h[l]) * (*est.h_hat_ap)[l];
  }
  const double harvest = 0.5 * g / 3.0;
  // alpha H = eta Pd + tau Pf ut / L + (1 - alpha - eta - tau) Pd
  const double alpha = (eta * 1e-3 + tau * 1e-2 * ut / 3 + (1 - eta - tau) * 1e-3) / (harvest + 1e-3);
  const double expected = (1 - alpha - eta - tau) * std::log2(1 + std::norm(c) / aa / p.N0);
  const auto r = rate_fdd(p, ch, est, eta, tau);
  CHECK(r.allocation.alpha == doctest::Approx(alpha).epsilon(1e-13));
  CHECK(r.rate == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("energy budgets close per realization and perfect-CSI log factor dominates") {
  Generator gen(RngStream{7, 0});
  for (int i = 0; i < 10000; ++i) {
    const int L = 2 + i % 5;
    const auto p = SystemParams::defaults(L, 30.0 * gen.uniform());
    const auto ch = sample_channel(p, gen);
    const double ph = harvested_power(p, ch);

    const double an = alpha_non_csi(p, ch);
    REQUIRE(std::fabs(an * ph - (1 - an) * p.Pd) <= 1e-12);

    const double eta = (1 + 99 * gen.uniform()) / p.Tc;
    const double at = alpha_tdd(p, ch, eta);
    REQUIRE(std::fabs(at * ph - (eta * p.Pe + (1 - at - eta) * p.Pd)) <= 1e-12);

    const double ef = (L + 100 * gen.uniform()) / p.Tc, tf = (L + 100 * gen.uniform()) / p.Tc;
    const auto est = sample_fdd_estimates(ch, ef, tf, p, gen);
    const double af = alpha_fdd(p, ch, est, tf);
    const double ut = norm2(*est.h_hat_ut);
    REQUIRE(std::fabs(af * ph - (ef * p.Pd + tf * p.Pf * ut / L + (1 - af - ef - tf) * p.Pd)) <= 1e-12);

    const auto rt = rate_tdd(p, ch, EstimateSet::tdd(ch.h), eta);
    const auto rn = rate_non_csi(p, ch);
    if (rt.feasible) {
      REQUIRE(rt.rate / (1 - at - eta) >= rn.rate / (1 - an) - 1e-12);
      REQUIRE(rt.allocation.alpha > 0.0);
      REQUIRE(rt.allocation.alpha < 1.0);
    }
    REQUIRE(rn.rate >= 0.0);
  }
}
