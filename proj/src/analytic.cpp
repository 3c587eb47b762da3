#include "swipt/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "swipt/errors.hpp"
#include "swipt/parallel.hpp"
#include "swipt/schemes.hpp"
#include "swipt/specfun.hpp"
#include "swipt/stats.hpp"

namespace swipt {

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::HighSnr: return "high-snr";
    case Regime::LowSnr: return "low-snr";
    case Regime::GridSearch: return "grid-search";
  }
  return "?";
}

Regime default_regime(const SystemParams& params) {
  return params.snr_db() > 15.0 ? Regime::HighSnr : Regime::LowSnr;
}

namespace {

constexpr double kLog2e = std::numbers::log2e;

std::int64_t block_count(std::int64_t n) { return (n + kSampleBlock - 1) / kSampleBlock; }

std::int64_t block_size(std::int64_t n, std::int64_t b) {
  return std::min(kSampleBlock, n - b * kSampleBlock);
}

ErgodicEstimate finish(const std::vector<stats::Moments>& blocks, RngStream seed) {
  stats::Moments all;
  for (const auto& m : blocks) all.merge(m);
  return ErgodicEstimate{all.mean(), all.std_err(), all.count(), seed};
}

template <class PerSample>
ErgodicEstimate channel_average(const SystemParams& params, std::int64_t n, RngStream seed,
                                int threads, PerSample f) {
  if (n < 1) throw PreconditionError("need at least one sample");
  std::vector<stats::Moments> blocks(static_cast<std::size_t>(block_count(n)));
  parallel_for(blocks.size(), threads, [&](std::size_t b) {
    Generator gen(seed.child(b));
    for (std::int64_t i = 0; i < block_size(n, static_cast<std::int64_t>(b)); ++i) {
      blocks[b].add(f(sample_channel(params, gen).gain));
    }
  });
  return finish(blocks, seed);
}

}  // namespace

ErgodicEstimate b1_monte_carlo(const SystemParams& p, std::int64_t n, RngStream seed,
                               int threads) {
  const double c = p.L * p.Pe / (p.beta * p.P);
  return channel_average(p, n, seed, threads, [&](double g) {
    return (1.0 + c / g) * std::log2(p.P * g / p.N0);
  });
}

ErgodicEstimate b5_monte_carlo(const SystemParams& p, std::int64_t n, RngStream seed,
                               int threads) {
  return channel_average(p, n, seed, threads, [&](double g) { return std::log2(p.P * g / p.N0); });
}

// ||h||^2 ~ Gamma(L, 1): E[ln X] = psi(L) and E[ln X / X] = psi(L-1)/(L-1).
double b1_constant(const SystemParams& p, ConstantMethod method, std::int64_t n, RngStream seed) {
  p.validate();
  if (method == ConstantMethod::MonteCarlo) return b1_monte_carlo(p, n, seed).mean;
  const double ln_snr = std::log(p.P / p.N0);
  return (ln_snr + specfun::digamma(p.L)) / std::numbers::ln2 +
         (p.L * p.Pe / (p.beta * p.P)) * (ln_snr + specfun::digamma(p.L - 1.0)) /
             ((p.L - 1.0) * std::numbers::ln2);
}

double b5_constant(const SystemParams& p, ConstantMethod method, std::int64_t n, RngStream seed) {
  p.validate();
  if (method == ConstantMethod::MonteCarlo) return b5_monte_carlo(p, n, seed).mean;
  return (std::log(p.P / p.N0) + specfun::digamma(p.L)) / std::numbers::ln2;
}

TrainingOptimum eta_tdd_star(const SystemParams& p, Regime regime) {
  p.validate();
  double eta = 0.0;
  if (regime == Regime::HighSnr) {
    const double b1 = b1_constant(p);
    if (!(b1 > 0.0)) throw PreconditionError("high-SNR training formula needs B1 > 0");
    eta = std::sqrt(p.N0 * p.L * kLog2e / (b1 * p.Tc * p.Pe * (p.L - 1.0)));
  } else if (regime == Regime::LowSnr) {
    const double x = (p.L - 1.0) * p.beta * p.P * p.Tc * p.Pe /
                     (p.L * p.N0 * (p.beta * p.P + p.Pe));
    eta = p.N0 / (p.Tc * p.Pe) * (-1.0 + std::sqrt(1.0 + x - 1.0 / p.L));
  } else {
    throw PreconditionError("eta_tdd_star takes HighSnr or LowSnr");
  }
  const double lo = 1.0 / p.Tc, hi = 1.0 - 1.0 / p.Tc;
  const double clamped = std::clamp(eta, lo, hi);
  return TrainingOptimum{clamped, 0.0, regime, clamped != eta};
}

TrainingOptimum fdd_star(const SystemParams& p, Regime regime) {
  p.validate();
  const double lo = static_cast<double>(p.L) / p.Tc;
  const double r = p.Pf / (p.beta * p.P);
  TrainingOptimum out;
  out.regime = regime;
  double eta = 0.0, tau = 0.0;
  if (regime == Regime::HighSnr) {
    const double b5 = b5_constant(p);
    if (!(b5 > 0.0)) throw PreconditionError("high-SNR feedback formula needs B5 > 0");
    tau = std::sqrt(p.N0 * p.L * p.L * kLog2e / (b5 * p.Tc * (p.L - 1.0) * p.Pf * (1.0 + r)));
    eta = std::sqrt((1.0 + r) * p.Pf / p.P) * tau;
    out.eta = std::max(eta, lo);
    out.tau = std::max(tau, lo);
  } else if (regime == Regime::LowSnr) {
    const double bp = p.beta * p.P;
    const double nl = p.N0 * p.L;
    eta = p.Pf * nl / (p.P * p.Tc * (bp + p.Pf)) *
          (-1.0 + std::sqrt(1.0 + p.Tc * p.P * (bp + p.Pf) / (p.Pf * nl)));
    out.eta = std::max(eta, lo);
    const double x = nl / (out.eta * p.Tc);
    const double num =
        nl * (-1.0 + std::sqrt(1.0 + 4.0 * p.beta * p.P * p.P * (bp / p.Pf + 1.0 + x / p.P) / (x * x)));
    tau = num / (2.0 * p.Tc * (bp + p.Pf + p.Pf * x / p.P));
    out.tau = std::max(tau, lo);
  } else {
    throw PreconditionError("fdd_star takes HighSnr or LowSnr");
  }
  out.clamped = out.eta != eta || out.tau != tau;
  return out;
}

TrainingOptimum analytic_optimum(Scheme scheme, const SystemParams& params, Regime regime) {
  switch (scheme) {
    case Scheme::NonCsi: return TrainingOptimum{0.0, 0.0, regime, false};
    case Scheme::Tdd: return eta_tdd_star(params, regime);
    case Scheme::Fdd: return fdd_star(params, regime);
  }
  return {};
}

void check_training(Scheme scheme, const SystemParams& p, double eta, double tau) {
  constexpr double slack = 1e-9;  // fractions built as k / Tc
  switch (scheme) {
    case Scheme::NonCsi: return;
    case Scheme::Tdd:
      if (!(eta * p.Tc >= 1.0 - slack && eta < 1.0)) {
        throw PreconditionError("TDD needs eta * Tc >= 1 and eta < 1");
      }
      return;
    case Scheme::Fdd:
      if (!(eta * p.Tc >= p.L - slack && tau * p.Tc >= p.L - slack && eta + tau < 1.0)) {
        throw PreconditionError("FDD needs eta * Tc >= L, tau * Tc >= L and eta + tau < 1");
      }
      return;
  }
}

ErgodicEstimate ergodic_rate(Scheme scheme, const SystemParams& p, double eta, double tau,
                             std::int64_t n, RngStream seed, int threads) {
  p.validate();
  check_training(scheme, p, eta, tau);
  if (n < 1) throw PreconditionError("need at least one sample");
  // Keep the sampled estimators away from the exact bound; the check above
  // already allows for k / Tc rounding.
  const double eta_s = scheme == Scheme::NonCsi ? 0.0 : std::max(eta, (scheme == Scheme::Tdd ? 1.0 : p.L) / p.Tc);
  const double tau_s = scheme == Scheme::Fdd ? std::max(tau, double(p.L) / p.Tc) : 0.0;
  std::vector<stats::Moments> blocks(static_cast<std::size_t>(block_count(n)));
  parallel_for(blocks.size(), threads, [&](std::size_t b) {
    Generator gen(seed.child(b));
    for (std::int64_t i = 0; i < block_size(n, static_cast<std::int64_t>(b)); ++i) {
      const auto ch = sample_channel(p, gen);
      double rate = 0.0;
      switch (scheme) {
        case Scheme::NonCsi: rate = rate_non_csi(p, ch).rate; break;
        case Scheme::Tdd:
          rate = rate_tdd(p, ch, sample_tdd_estimate(ch, eta_s, p, gen), eta).rate;
          break;
        case Scheme::Fdd:
          rate = rate_fdd(p, ch, sample_fdd_estimates(ch, eta_s, tau_s, p, gen), eta, tau).rate;
          break;
      }
      blocks[b].add(rate);
    }
  });
  return finish(blocks, seed);
}

GramSet draw_gram_set(Scheme scheme, int L, std::int64_t n, RngStream seed, int threads) {
  if (n < 1) throw PreconditionError("need at least one sample");
  if (L < 2) throw PreconditionError("L must be at least 2");
  GramSet set{L, scheme, seed, std::vector<GramDraw>(static_cast<std::size_t>(n))};
  const int vectors = scheme == Scheme::NonCsi ? 1 : scheme == Scheme::Tdd ? 2 : 3;
  parallel_for(static_cast<std::size_t>(block_count(n)), threads, [&](std::size_t b) {
    Generator gen(seed.child(b));
    std::vector<std::complex<double>> v(3 * static_cast<std::size_t>(L));
    const std::int64_t first = static_cast<std::int64_t>(b) * kSampleBlock;
    for (std::int64_t i = 0; i < block_size(n, static_cast<std::int64_t>(b)); ++i) {
      for (int k = 0; k < vectors * L; ++k) v[k] = gen.complex_normal(1.0);
      const std::span<const std::complex<double>> h(v.data(), L), z1(v.data() + L, L),
          z2(v.data() + 2 * L, L);
      GramDraw& d = set.draws[static_cast<std::size_t>(first + i)];
      d.g = norm2(h);
      if (vectors >= 2) {
        d.a1 = norm2(z1);
        d.c1 = inner(h, z1);
      }
      if (vectors >= 3) {
        d.a2 = norm2(z2);
        d.c2 = inner(h, z2);
        d.c12 = inner(z1, z2);
      }
    }
  });
  return set;
}

namespace {

// Rate of one draw at fixed (eta, tau), mirroring rate_tdd / rate_fdd.
struct PairedRate {
  Scheme scheme;
  const SystemParams& p;
  double eta, tau, s1, s2;

  PairedRate(Scheme sc, const SystemParams& params, double e, double t)
      : scheme(sc), p(params), eta(e), tau(t), s1(0.0), s2(0.0) {
    if (scheme == Scheme::Tdd) s1 = std::sqrt(tdd_noise_variance(p, std::max(e, 1.0 / p.Tc)));
    if (scheme == Scheme::Fdd) {
      s1 = std::sqrt(fdd_ut_noise_variance(p, std::max(e, double(p.L) / p.Tc)));
      s2 = std::sqrt(fdd_ap_noise_variance(p, std::max(t, double(p.L) / p.Tc)));
    }
  }

  double operator()(const GramDraw& d) const {
    if (!(d.g > 0.0)) return 0.0;
    switch (scheme) {
      case Scheme::NonCsi: {
        const double pre = kernel::prelog_non_csi(p, d.g);
        return pre * std::log2(1.0 + p.P * d.g / (p.N0 * p.L));
      }
      case Scheme::Tdd: {
        const double pre = kernel::prelog_tdd(p, d.g, eta);
        if (!(pre > 0.0)) return 0.0;
        const double num = std::norm(d.g + s1 * d.c1);
        const double den = d.g + 2.0 * s1 * d.c1.real() + s1 * s1 * d.a1;
        return pre * std::log2(1.0 + p.P * std::min(num / den, d.g) / p.N0);
      }
      case Scheme::Fdd: {
        const double ut = d.g + 2.0 * s1 * d.c1.real() + s1 * s1 * d.a1;
        const double pre = kernel::prelog_fdd(p, d.g, ut, eta, tau);
        if (!(pre > 0.0)) return 0.0;
        const double num = std::norm(d.g + s1 * d.c1 + s2 * d.c2);
        const double den = ut + s2 * s2 * d.a2 + 2.0 * s2 * d.c2.real() +
                           2.0 * s1 * s2 * d.c12.real();
        return pre * std::log2(1.0 + p.P * std::min(num / den, d.g) / p.N0);
      }
    }
    return 0.0;
  }
};

ErgodicEstimate paired_estimate(const PairedRate& rate, const GramSet& set) {
  const auto n = static_cast<std::int64_t>(set.draws.size());
  std::vector<stats::Moments> blocks(static_cast<std::size_t>(block_count(n)));
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::int64_t first = static_cast<std::int64_t>(b) * kSampleBlock;
    for (std::int64_t i = 0; i < block_size(n, static_cast<std::int64_t>(b)); ++i) {
      blocks[b].add(rate(set.draws[static_cast<std::size_t>(first + i)]));
    }
  }
  return finish(blocks, set.seed);
}

void require_compatible(Scheme scheme, const SystemParams& p, const GramSet& set) {
  if (set.L != p.L) throw PreconditionError("draw set was made for a different L");
  const auto rank = [](Scheme s) { return s == Scheme::NonCsi ? 0 : s == Scheme::Tdd ? 1 : 2; };
  if (rank(set.scheme) < rank(scheme)) {
    throw PreconditionError("draw set lacks the noise vectors this scheme needs");
  }
}

}  // namespace

ErgodicEstimate ergodic_rate_paired(Scheme scheme, const SystemParams& p, double eta, double tau,
                                    const GramSet& set) {
  p.validate();
  check_training(scheme, p, eta, tau);
  require_compatible(scheme, p, set);
  return paired_estimate(PairedRate(scheme, p, eta, tau), set);
}

std::vector<double> paired_rate_samples(Scheme scheme, const SystemParams& p, double eta,
                                        double tau, const GramSet& set) {
  p.validate();
  check_training(scheme, p, eta, tau);
  require_compatible(scheme, p, set);
  const PairedRate rate(scheme, p, eta, tau);
  std::vector<double> out(set.draws.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = rate(set.draws[i]);
  return out;
}

GridResult grid_search(Scheme scheme, const SystemParams& p, const GridSpec& grid,
                       const GramSet& set, int threads) {
  p.validate();
  require_compatible(scheme, p, set);
  if (grid.coarse_step < 1 || grid.fine_step < 1) throw PreconditionError("grid steps must be >= 1");
  const int tc = p.Tc;
  const int min_sym = scheme == Scheme::Tdd ? 1 : p.L;

  struct Point {
    int i, j;  // eta = i / Tc, tau = j / Tc
  };
  auto feasible = [&](const Point& q) {
    if (scheme == Scheme::NonCsi) return q.i == 0 && q.j == 0;
    if (q.i < min_sym || q.i >= tc) return false;
    if (scheme == Scheme::Tdd) return q.j == 0;
    return q.j >= min_sym && q.i + q.j < tc;
  };

  GridResult result;
  std::vector<Point> points;
  std::vector<ErgodicEstimate> values;
  auto evaluate = [&](const std::vector<Point>& pts) {
    values.assign(pts.size(), {});
    parallel_for(pts.size(), threads, [&](std::size_t k) {
      const double eta = double(pts[k].i) / tc, tau = double(pts[k].j) / tc;
      values[k] = paired_estimate(PairedRate(scheme, p, eta, tau), set);
    });
    result.points_evaluated += static_cast<std::int64_t>(pts.size());
    std::size_t best = 0;
    for (std::size_t k = 1; k < pts.size(); ++k) {
      if (values[k].mean > values[best].mean) best = k;
    }
    return best;
  };

  if (scheme == Scheme::NonCsi) {
    points = {{0, 0}};
  } else {
    for (int i = min_sym; i < tc; i += grid.coarse_step) {
      if (scheme == Scheme::Tdd) {
        points.push_back({i, 0});
      } else {
        for (int j = min_sym; i + j < tc; j += grid.coarse_step) points.push_back({i, j});
      }
    }
  }
  if (points.empty()) throw PreconditionError("grid has no feasible point");
  std::size_t best = evaluate(points);
  Point winner = points[best];
  ErgodicEstimate winner_value = values[best];

  if (grid.refine && scheme != Scheme::NonCsi && grid.fine_step < grid.coarse_step) {
    std::vector<Point> fine;
    const int span = grid.coarse_step - 1;
    const int jspan = scheme == Scheme::Fdd ? span : 0;
    for (int di = -span; di <= span; di += grid.fine_step) {
      for (int dj = -jspan; dj <= jspan; dj += grid.fine_step) {
        const Point q{winner.i + di, winner.j + dj};
        if (feasible(q)) fine.push_back(q);
      }
    }
    best = evaluate(fine);
    if (values[best].mean > winner_value.mean) {
      winner = fine[best];
      winner_value = values[best];
    }
  }

  result.optimum = TrainingOptimum{double(winner.i) / tc, double(winner.j) / tc, Regime::GridSearch, false};
  result.estimate = winner_value;
  if (scheme != Scheme::NonCsi) {
    const bool low_i = winner.i <= min_sym;
    const bool low_j = scheme == Scheme::Fdd && winner.j <= min_sym;
    const bool high = winner.i + winner.j >= tc - 1;
    result.on_boundary = low_i || low_j || high;
  }
  return result;
}

GridResult grid_search(Scheme scheme, const SystemParams& p, const GridSpec& grid,
                       std::int64_t n, RngStream seed, int threads) {
  return grid_search(scheme, p, grid, draw_gram_set(scheme, p.L, n, seed, threads), threads);
}

}  // namespace swipt
