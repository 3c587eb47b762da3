#pragma once

// Small statistics toolbox for the Monte-Carlo estimators and property
// tests: running moments, Wilson intervals, Kolmogorov-Smirnov tests and
// sample correlation.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace swipt::stats {

/// Welford accumulator; merge() combines partial results in a fixed order.
class Moments {
 public:
  void add(double x);
  void merge(const Moments& other);
  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased
  double std_err() const;

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for k successes in n trials at normal quantile z.
Interval wilson(std::int64_t k, std::int64_t n, double z = 1.959963984540054);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::int64_t n = 0;
};

/// Asymptotic Kolmogorov p-value for statistic d on n samples.
double kolmogorov_p_value(double d, std::int64_t n);

/// One-sample KS test of `samples` against `cdf`. Sorts a copy.
KsResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);

/// KS test of probability-integral-transformed values against U(0,1).
KsResult ks_uniform(std::span<const double> u);

double correlation(std::span<const double> x, std::span<const double> y);

struct Estimate {
  double value = 0.0;
  double std_err = 0.0;
};

/// mean(a) - mean(b) over paired samples.
Estimate paired_difference(std::span<const double> a, std::span<const double> b);

/// mean(a) / mean(b) over paired samples; delta-method standard error.
Estimate paired_ratio(std::span<const double> a, std::span<const double> b);

/// mean(a1)/mean(b1) - mean(a2)/mean(b2) with all four samples paired.
Estimate paired_ratio_difference(std::span<const double> a1, std::span<const double> b1,
                                 std::span<const double> a2, std::span<const double> b2);

}  // namespace swipt::stats
