#pragma once

// Globally adaptive Gauss-Kronrod (10/21-point) integration on finite
// intervals. Semi-infinite axes are handled by callers through truncation.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <vector>

namespace swipt::quad {

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  long evaluations = 0;
  bool converged = true;
};

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_depth = 30;       // bisection levels below an initial panel
  int max_intervals = 4000;
  int initial_panels = 1;   // uniform split of each breakpoint segment
};

namespace detail {

// Kronrod abscissae (descending, last is the centre) and weights; every
// second abscissa from index 1 is a 10-point Gauss node.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525617309, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
  int depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk21(F& f, double a, double b, int depth) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kWgk[10];
  double gauss = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return Panel{a, b, kronrod, std::fabs(kronrod - gauss), depth};
}

}  // namespace detail

/// Integrates f over [a, b]. Breakpoints inside (a, b) start new panels.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {},
                 std::span<const double> breakpoints = {}) {
  Result out;
  if (!(b > a)) return out;

  std::vector<double> edges{a};
  std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
  std::sort(cuts.begin(), cuts.end());
  for (double c : cuts) {
    if (c > edges.back() && c < b) edges.push_back(c);
  }
  edges.push_back(b);

  std::priority_queue<detail::Panel> open;
  std::vector<detail::Panel> closed;
  double total = 0.0;
  double error = 0.0;
  const int panels = std::max(1, opt.initial_panels);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double width = (edges[i + 1] - edges[i]) / panels;
    for (int j = 0; j < panels; ++j) {
      const double lo = edges[i] + j * width;
      const double hi = j + 1 == panels ? edges[i + 1] : lo + width;
      detail::Panel p = detail::gk21(f, lo, hi, 0);
      out.evaluations += 21;
      total += p.value;
      error += p.error;
      open.push(p);
    }
  }

  auto done = [&] { return error <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(total)); };
  int intervals = static_cast<int>(open.size());
  while (!done() && !open.empty() && intervals < opt.max_intervals) {
    detail::Panel worst = open.top();
    open.pop();
    if (worst.depth >= opt.max_depth) {
      closed.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    detail::Panel left = detail::gk21(f, worst.a, mid, worst.depth + 1);
    detail::Panel right = detail::gk21(f, mid, worst.b, worst.depth + 1);
    out.evaluations += 42;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    open.push(left);
    open.push(right);
    ++intervals;
  }

  // Re-sum from the panels to drop accumulated rounding in the running totals.
  total = 0.0;
  error = 0.0;
  for (const auto& p : closed) {
    total += p.value;
    error += p.error;
  }
  while (!open.empty()) {
    total += open.top().value;
    error += open.top().error;
    open.pop();
  }
  out.value = total;
  out.abs_error = error;
  out.converged = error <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(total));
  return out;
}

}  // namespace swipt::quad
