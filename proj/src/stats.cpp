#include "swipt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "swipt/errors.hpp"

namespace swipt::stats {

void Moments::add(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

void Moments::merge(const Moments& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double n = static_cast<double>(n_ + o.n_);
  const double d = o.mean_ - mean_;
  mean_ += d * static_cast<double>(o.n_) / n;
  m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
  n_ += o.n_;
}

double Moments::variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

double Moments::std_err() const {
  return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

Interval wilson(std::int64_t k, std::int64_t n, double z) {
  if (n <= 0 || k < 0 || k > n) throw PreconditionError("wilson: need 0 <= k <= n, n > 0");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z / (1 + z2 / nn) * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
  Interval out{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  // Guard the ordering against rounding at the extremes.
  out.low = std::min(out.low, p);
  out.high = std::max(out.high, p);
  return out;
}

double kolmogorov_p_value(double d, std::int64_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf) {
  std::vector<double> u(samples.size());
  std::transform(samples.begin(), samples.end(), u.begin(), cdf);
  return ks_uniform(u);
}

KsResult ks_uniform(std::span<const double> values) {
  std::vector<double> u(values.begin(), values.end());
  if (u.empty()) throw PreconditionError("ks test needs samples");
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - u[i], u[i] - static_cast<double>(i) / n));
  }
  const auto count = static_cast<std::int64_t>(u.size());
  return KsResult{d, kolmogorov_p_value(d, count), count};
}

double correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("correlation: bad lengths");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

namespace {

void require_paired(std::size_t n, std::initializer_list<std::size_t> sizes) {
  if (n < 2) throw PreconditionError("paired estimate: need at least two samples");
  for (std::size_t m : sizes) {
    if (m != n) throw PreconditionError("paired estimate: samples differ in length");
  }
}

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

}  // namespace

Estimate paired_difference(std::span<const double> a, std::span<const double> b) {
  require_paired(a.size(), {b.size()});
  Moments m;
  for (std::size_t i = 0; i < a.size(); ++i) m.add(a[i] - b[i]);
  return {m.mean(), m.std_err()};
}

Estimate paired_ratio(std::span<const double> a, std::span<const double> b) {
  require_paired(a.size(), {b.size()});
  const double ma = mean_of(a), mb = mean_of(b);
  if (mb == 0.0) throw PreconditionError("paired_ratio: denominator mean is zero");
  const double r = ma / mb;
  Moments m;
  for (std::size_t i = 0; i < a.size(); ++i) m.add((a[i] - r * b[i]) / mb);
  return {r, m.std_err()};
}

Estimate paired_ratio_difference(std::span<const double> a1, std::span<const double> b1,
                                 std::span<const double> a2, std::span<const double> b2) {
  require_paired(a1.size(), {b1.size(), a2.size(), b2.size()});
  const double m1 = mean_of(b1), m2 = mean_of(b2);
  if (m1 == 0.0 || m2 == 0.0) throw PreconditionError("paired_ratio_difference: zero mean");
  const double r1 = mean_of(a1) / m1, r2 = mean_of(a2) / m2;
  Moments m;
  for (std::size_t i = 0; i < a1.size(); ++i) {
    m.add((a1[i] - r1 * b1[i]) / m1 - (a2[i] - r2 * b2[i]) / m2);
  }
  return {r1 - r2, m.std_err()};
}

}  // namespace swipt::stats
