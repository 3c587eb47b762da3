#include <cmath>
#include <random>

#include "doctest.h"
#include "swipt/rng.hpp"
#include "swipt/stats.hpp"

using swipt::Generator;
using swipt::RngStream;

TEST_CASE("engine conforms to the standard mt19937_64 sequence") {
  std::mt19937_64 e;
  e.discard(9999);
  CHECK(e() == 9981545732273789042ULL);
}

TEST_CASE("identical streams reproduce identical draws") {
  Generator a(RngStream{42, 7}), b(RngStream{42, 7});
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.uniform() == b.uniform());
    CHECK(a.normal() == b.normal());
  }
}

TEST_CASE("distinct streams and children differ") {
  Generator a(RngStream{42, 0}), b(RngStream{42, 1}), c(RngStream{43, 0});
  const double x = a.uniform();
  CHECK(x != b.uniform());
  CHECK(x != c.uniform());
  const RngStream parent{1, 2};
  CHECK(parent.child(0) != parent.child(1));
  CHECK(parent.child(5) == parent.child(5));
  CHECK(parent.child(0) != RngStream{1, 3}.child(0));
}

TEST_CASE("uniform stays inside the open unit interval") {
  Generator g(RngStream{1, 0});
  swipt::stats::Moments m;
  for (int i = 0; i < 200000; ++i) {
    const double u = g.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    m.add(u);
  }
  CHECK(std::fabs(m.mean() - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / 200000));
}

TEST_CASE("normal and complex normal moments") {
  Generator g(RngStream{2, 0});
  const int n = 400000;
  swipt::stats::Moments z, re, power;
  std::vector<double> draws(n);
  for (int i = 0; i < n; ++i) {
    draws[i] = g.normal();
    z.add(draws[i]);
  }
  CHECK(std::fabs(z.mean()) < 4.0 / std::sqrt(n));
  CHECK(std::fabs(z.variance() - 1.0) < 4.0 * std::sqrt(2.0 / n));
  auto ks = swipt::stats::ks_test(draws, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); });
  CHECK(ks.p_value > 0.01);

  for (int i = 0; i < n; ++i) {
    const auto c = g.complex_normal(3.0);
    re.add(c.real());
    power.add(std::norm(c));
  }
  CHECK(std::fabs(re.variance() - 1.5) < 4.0 * 1.5 * std::sqrt(2.0 / n));
  CHECK(std::fabs(power.mean() - 3.0) < 4.0 * 3.0 / std::sqrt(n));
}
