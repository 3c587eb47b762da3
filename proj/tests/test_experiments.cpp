#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "swipt/errors.hpp"
#include "swipt/experiments.hpp"

using namespace swipt;

namespace {

double real_at(const Table& t, std::size_t row, const std::string& col) {
  return std::get<double>(t.rows[row][t.column(col)]);
}

std::string text_at(const Table& t, std::size_t row, const std::string& col) {
  return std::get<std::string>(t.rows[row][t.column(col)]);
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.snr_db = {0, 15, 30};
  c.samples = 20000;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("reals are written with 17 significant digits and no locale") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(1e-30) == "1.0000000000000001e-30");
  CHECK(format_real(-2.5) == "-2.5");
  CHECK(format_real(std::nan("")) == "nan");
  CHECK(format_real(INFINITY) == "inf");
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, 4.9e-324}) {
    const std::string s = format_real(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
  }
}

TEST_CASE("csv quoting") {
  Table t;
  t.columns = {"a", "b"};
  t.rows.push_back({std::string("x,y"), std::monostate{}});
  t.rows.push_back({true, std::int64_t{7}});
  CHECK(t.csv() == "a,b\n\"x,y\",\n" "true,7\n");
}

TEST_CASE("rate sweep rows, optimum dominance and gains over non-CSI") {
  const auto c = small_config();
  const Table t = run_rate_sweep(c);
  REQUIRE(t.rows.size() == 9);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double zeta = real_at(t, i, "zeta"), se = real_at(t, i, "zeta_se");
    CHECK(zeta <= 1.0 + 2.0 * se + 1e-12);
    const std::string scheme = text_at(t, i, "scheme");
    const double ratio = real_at(t, i, "ratio_to_non_csi");
    if (scheme == "non-csi") {
      CHECK(ratio == 1.0);
    } else {
      CHECK(ratio > 1.0);
    }
  }
  // Row order follows the config: SNR outer, scheme inner.
  CHECK(text_at(t, 0, "scheme") == "non-csi");
  CHECK(text_at(t, 4, "scheme") == "tdd");
  CHECK(real_at(t, 4, "snr_db") == 15.0);
}

TEST_CASE("identical config and seed give byte-identical output, any thread count") {
  auto c = small_config();
  c.snr_db = {10};
  c.samples = 5000;
  const std::string a = run_rate_sweep(c, 1).csv();
  CHECK(a == run_rate_sweep(c, 1).csv());
  CHECK(a == run_rate_sweep(c, 3).csv());
  c.seed = 6;
  CHECK(a != run_rate_sweep(c, 1).csv());

  auto o = small_config();
  o.snr_db = {10};
  o.samples = 5000;
  o.alpha_scales = {2};
  CHECK(run_outage_sweep(o, 1).csv() == run_outage_sweep(o, 2).csv());
}

TEST_CASE("outage sweep pairs closed forms with Monte-Carlo") {
  auto c = small_config();
  c.snr_db = {10, 30};
  c.samples = 100000;
  const Table t = run_outage_sweep(c);
  // 2 SNR x 3 schemes x 2 alpha scales x 2 metrics
  REQUIRE(t.rows.size() == 24);
  int matched = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    matched += std::get<bool>(t.rows[i][t.column("match")]);
    const double cf = real_at(t, i, "closed_form");
    CHECK(cf >= 0.0);
    CHECK(cf <= 1.0);
    if (text_at(t, i, "metric") == "energy_shortage") {
      // Doubling alpha roughly halves the gamma argument: a drop of at most 2^L.
      const double drop = real_at(t, i, "doubling_drop");
      CHECK(drop > 1.0);
      CHECK(drop < 8.5);
    } else {
      CHECK(std::holds_alternative<std::monostate>(t.rows[i][t.column("doubling_drop")]));
    }
  }
  // Independent 95% intervals: allow the odd chance miss.
  CHECK(matched >= 21);
}

TEST_CASE("minimal alpha policy gives Monte-Carlo rows only") {
  auto c = small_config();
  c.snr_db = {10};
  c.alpha_policy = PolicyMode::Minimal;
  const Table t = run_outage_sweep(c);
  REQUIRE(t.rows.size() == 3);
  for (const auto& row : t.rows) {
    CHECK(std::holds_alternative<std::monostate>(row[t.column("closed_form")]));
    CHECK(std::get<std::string>(row[t.column("policy")]) == "minimal");
  }
}

TEST_CASE("an explicit alpha that leaves no data time is a config error") {
  auto c = small_config();
  c.snr_db = {0};
  c.schemes = {Scheme::Tdd};
  c.alpha = 0.9;
  CHECK_THROWS_AS(run_outage_sweep(c), ConfigError);
}

TEST_CASE("optimize lists each approximation and the grid optimum") {
  auto c = small_config();
  c.snr_db = {30};
  c.samples = 5000;
  c.schemes = {Scheme::NonCsi, Scheme::Tdd};
  const Table t = run_optimize(c);
  REQUIRE(t.rows.size() == 3);
  CHECK(text_at(t, 0, "method") == "high-snr");
  CHECK(text_at(t, 1, "method") == "low-snr");
  CHECK(text_at(t, 2, "method") == "grid-search");
  const double eta_sym = real_at(t, 2, "eta_symbols");
  CHECK(eta_sym == std::round(eta_sym));
}

TEST_CASE("empty scheme list is rejected") {
  auto c = small_config();
  c.schemes.clear();
  CHECK_THROWS_AS(run_outage_sweep(c), ConfigError);
  CHECK_THROWS_AS(run_rate_sweep(c), ConfigError);
}
