#include <cmath>
#include <numbers>

#include "doctest.h"
#include "swipt/quadrature.hpp"

using swipt::quad::integrate;
using swipt::quad::Options;

TEST_CASE("Kronrod rule is exact to degree 31, Gauss embedding to degree 19") {
  for (int k = 0; k <= 31; ++k) {
    auto f = [k](double x) { return std::pow(x, k); };
    const auto panel = swipt::quad::detail::gk21(f, -1.0, 1.0, 0);
    const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(panel.value == doctest::Approx(exact).epsilon(1e-14));
    if (k <= 19) CHECK(panel.error < 1e-14);
  }
}

TEST_CASE("weights integrate the constant exactly") {
  double kronrod = swipt::quad::detail::kWgk[10];
  double gauss = 0.0;
  for (int j = 0; j < 10; ++j) kronrod += 2.0 * swipt::quad::detail::kWgk[j];
  for (double w : swipt::quad::detail::kWg) gauss += 2.0 * w;
  CHECK(kronrod == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(gauss == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("smooth and peaked integrands") {
  auto r = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));

  // Narrow Gaussian bump. A feature no node lands on is invisible to the
  // error estimate, so the breakpoints bracket it.
  const double centre = 3.7, width = 1e-3;
  auto bump = [&](double x) { return std::exp(-0.5 * std::pow((x - centre) / width, 2)); };
  const double exact = width * std::sqrt(2.0 * std::numbers::pi);
  const double cuts[] = {centre - 40 * width, centre - 5 * width, centre,
                         centre + 5 * width, centre + 40 * width};
  Options opt;
  opt.abs_tol = 1e-14;
  opt.rel_tol = 1e-12;
  r = integrate(bump, 0.0, 10.0, opt, cuts);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("integrable endpoint singularity") {
  auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                     Options{.abs_tol = 1e-9, .rel_tol = 0.0, .max_depth = 60});
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("depth limit reports nonconvergence") {
  auto step = [](double x) { return x < 0.3141592 ? 0.0 : 1.0; };
  auto r = integrate(step, 0.0, 1.0, Options{.abs_tol = 1e-15, .rel_tol = 0.0, .max_depth = 3});
  CHECK_FALSE(r.converged);
  CHECK(r.abs_error > 0.0);
  CHECK(r.value == doctest::Approx(1.0 - 0.3141592).epsilon(1e-2));
}

TEST_CASE("empty interval") {
  auto r = integrate([](double) { return 1.0; }, 2.0, 2.0);
  CHECK(r.value == 0.0);
  CHECK(r.evaluations == 0);
}
