#include "swipt/experiments.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "swipt/errors.hpp"
#include "swipt/montecarlo.hpp"
#include "swipt/outage.hpp"
#include "swipt/stats.hpp"

namespace swipt {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string render(const Table::Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(const std::string& s) const { return quote(s); }
    std::string operator()(double x) const { return format_real(x); }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  } visitor;
  return std::visit(visitor, c);
}

using Cell = Table::Cell;

Cell str(std::string_view s) { return std::string(s); }
Cell num(int x) { return static_cast<std::int64_t>(x); }
Cell num(std::int64_t x) { return x; }

// Stream naming: every Monte-Carlo run of a sweep gets its own child of
// (seed, tag), keyed by its position in the config.
RngStream stream_for(std::uint64_t seed, std::uint64_t tag, std::uint64_t key) {
  return RngStream{seed, tag}.child(key);
}

constexpr std::uint64_t kRateTag = 1;
constexpr std::uint64_t kOutageTag = 2;
constexpr std::uint64_t kGridTag = 3;

std::uint64_t point_key(std::size_t li, std::size_t si, std::size_t ci, std::size_t extra = 0) {
  return ((static_cast<std::uint64_t>(li) * 4096 + si) * 8 + ci) * 4096 + extra;
}

}  // namespace

void Table::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << quote(columns[i]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << render(row[i]);
    out << '\n';
  }
}

std::string Table::csv() const {
  std::ostringstream s;
  write_csv(s);
  return s.str();
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("no column '" + name + "'");
}

TrainingOptimum resolve_training(const ExperimentConfig& c, Scheme scheme, const SystemParams& p,
                                 int threads) {
  switch (c.training) {
    case TrainingSource::AnalyticAuto: return analytic_optimum(scheme, p, default_regime(p));
    case TrainingSource::AnalyticHigh: return analytic_optimum(scheme, p, Regime::HighSnr);
    case TrainingSource::AnalyticLow: return analytic_optimum(scheme, p, Regime::LowSnr);
    case TrainingSource::Explicit: {
      TrainingOptimum t;
      if (scheme != Scheme::NonCsi) t.eta = c.eta;
      if (scheme == Scheme::Fdd) t.tau = c.tau;
      t.regime = Regime::GridSearch;
      check_training(scheme, p, t.eta, t.tau);
      return t;
    }
    case TrainingSource::GridSearch: {
      if (scheme == Scheme::NonCsi) return TrainingOptimum{0.0, 0.0, Regime::GridSearch, false};
      const RngStream seed{c.seed, kGridTag};
      return grid_search(scheme, p, c.grid_spec, c.samples, seed.child(p.L), threads).optimum;
    }
  }
  throw PreconditionError("unknown training source");
}

Table run_rate_sweep(const ExperimentConfig& c, int threads) {
  c.validate();
  Table t;
  t.columns = {"scheme",        "L",         "snr_db",      "training",   "regime",
               "eta",           "tau",       "clamped",     "rate",       "rate_se",
               "grid_eta",      "grid_tau",  "grid_rate",   "grid_rate_se", "grid_points",
               "grid_on_boundary", "zeta",   "zeta_se",     "rate_non_csi", "ratio_to_non_csi",
               "ratio_se",      "samples"};
  for (std::size_t li = 0; li < c.L.size(); ++li) {
    const int L = c.L[li];
    // One draw set per L: every scheme and SNR reuses it.
    const GramSet set = draw_gram_set(Scheme::Fdd, L, c.samples,
                                      stream_for(c.seed, kRateTag, point_key(li, 0, 0)), threads);
    for (std::size_t si = 0; si < c.snr_db.size(); ++si) {
      const SystemParams p = c.params(L, c.snr_db[si]);
      const auto non_csi = paired_rate_samples(Scheme::NonCsi, p, 0.0, 0.0, set);
      stats::Moments nc;
      for (double r : non_csi) nc.add(r);
      for (Scheme scheme : c.schemes) {
        GridResult grid;
        const bool run_grid = c.grid || c.training == TrainingSource::GridSearch;
        if (run_grid) grid = grid_search(scheme, p, c.grid_spec, set, threads);
        TrainingOptimum opt = c.training == TrainingSource::GridSearch
                                  ? grid.optimum
                                  : resolve_training(c, scheme, p, threads);
        const auto rates = paired_rate_samples(scheme, p, opt.eta, opt.tau, set);
        stats::Moments m;
        for (double r : rates) m.add(r);
        const auto ratio = stats::paired_ratio(rates, non_csi);

        std::vector<Cell> row{str(to_string(scheme)),
                              num(L),
                              c.snr_db[si],
                              str(to_string(c.training)),
                              str(c.training == TrainingSource::Explicit
                                      ? std::string_view("explicit")
                                      : to_string(opt.regime)),
                              opt.eta,
                              opt.tau,
                              opt.clamped,
                              m.mean(),
                              m.std_err()};
        if (run_grid) {
          const auto grid_rates =
              paired_rate_samples(scheme, p, grid.optimum.eta, grid.optimum.tau, set);
          const auto zeta = stats::paired_ratio(rates, grid_rates);
          row.insert(row.end(), {grid.optimum.eta, grid.optimum.tau, grid.estimate.mean,
                                 grid.estimate.std_err, num(grid.points_evaluated),
                                 grid.on_boundary, zeta.value, zeta.std_err});
        } else {
          row.insert(row.end(), 8, std::monostate{});
        }
        row.insert(row.end(), {nc.mean(), ratio.value, ratio.std_err, num(c.samples)});
        t.rows.push_back(std::move(row));
      }
    }
  }
  return t;
}

Table run_outage_sweep(const ExperimentConfig& c, int threads) {
  c.validate();
  Table t;
  t.columns = {"scheme",      "L",           "snr_db",       "metric",      "policy",
               "alpha_scale", "alpha",       "eta",          "tau",         "target_rate",
               "closed_form", "closed_form_error", "branch",  "mc_p_hat",    "mc_ci95_low",
               "mc_ci95_high", "mc_hits",    "mc_samples",   "match",       "doubling_drop"};
  const bool fixed = c.alpha_policy == PolicyMode::Fixed;
  std::vector<std::optional<double>> scales;
  if (c.alpha) scales.push_back(std::nullopt);
  else for (double s : c.alpha_scales) scales.emplace_back(s);

  for (std::size_t li = 0; li < c.L.size(); ++li) {
    for (std::size_t si = 0; si < c.snr_db.size(); ++si) {
      const SystemParams p = c.params(c.L[li], c.snr_db[si]);
      for (std::size_t ci = 0; ci < c.schemes.size(); ++ci) {
        const Scheme scheme = c.schemes[ci];
        const TrainingOptimum opt = resolve_training(c, scheme, p, threads);
        const auto head = [&](std::string_view metric, std::string_view policy, Cell scale,
                              Cell alpha) {
          return std::vector<Cell>{str(to_string(scheme)), num(c.L[li]), c.snr_db[si],
                                   str(metric), str(policy), scale, alpha, opt.eta, opt.tau,
                                   c.target_rate};
        };

        if (!fixed) {
          const auto mc = mc_data_outage(scheme, p, AlphaPolicy::minimal(), opt.eta, opt.tau,
                                         c.target_rate, c.samples,
                                         stream_for(c.seed, kOutageTag, point_key(li, si, ci)),
                                         threads);
          auto row = head("data_outage", "minimal", std::monostate{}, std::monostate{});
          row.insert(row.end(), {std::monostate{}, std::monostate{}, std::monostate{}, mc.p_hat,
                                 mc.ci95_low, mc.ci95_high, num(mc.hits), num(mc.n),
                                 std::monostate{}, std::monostate{}});
          t.rows.push_back(std::move(row));
          continue;
        }

        const double alpha_ref = mean_channel_alpha(scheme, p, opt.eta, opt.tau);
        for (std::size_t ai = 0; ai < scales.size(); ++ai) {
          const double alpha = scales[ai] ? *scales[ai] * alpha_ref : *c.alpha;
          if (!(alpha > 0.0 && alpha + opt.eta + opt.tau < 1.0)) {
            throw ConfigError("alpha = " + format_real(alpha) + " leaves no data time for " +
                              std::string(to_string(scheme)) + " at L=" +
                              std::to_string(c.L[li]) + ", " + format_real(c.snr_db[si]) + " dB");
          }
          const Cell scale = scales[ai] ? Cell{*scales[ai]} : Cell{std::monostate{}};
          for (int metric = 0; metric < 2; ++metric) {
            const RngStream stream =
                stream_for(c.seed, kOutageTag, point_key(li, si, ci, 2 * ai + metric + 1));
            OutageResult cf;
            BernoulliEstimate mc;
            Cell drop = std::monostate{};
            if (metric == 0) {
              cf = energy_shortage(scheme, p, alpha, opt.eta, opt.tau, c.quadrature);
              if (alpha * 2.0 + opt.eta + opt.tau < 1.0) {
                const double doubled =
                    energy_shortage(scheme, p, 2.0 * alpha, opt.eta, opt.tau, c.quadrature)
                        .probability;
                drop = doubled > 0.0 ? cf.probability / doubled
                                     : std::numeric_limits<double>::infinity();
              }
              mc = mc_energy_shortage(scheme, p, TimeAllocation(alpha, opt.eta, opt.tau),
                                      c.samples, stream, threads);
            } else {
              cf = data_outage(scheme, p, alpha, opt.eta, opt.tau, c.target_rate, c.quadrature);
              mc = mc_data_outage(scheme, p, AlphaPolicy::fixed(alpha), opt.eta, opt.tau,
                                  c.target_rate, c.samples, stream, threads);
            }
            const bool match = cf.probability + cf.est_error >= mc.ci95_low &&
                               cf.probability - cf.est_error <= mc.ci95_high;
            auto row = head(metric == 0 ? "energy_shortage" : "data_outage", "fixed", scale, alpha);
            row.insert(row.end(), {cf.probability, cf.est_error, cf.branch, mc.p_hat, mc.ci95_low,
                                   mc.ci95_high, num(mc.hits), num(mc.n), match, drop});
            t.rows.push_back(std::move(row));
          }
        }
      }
    }
  }
  return t;
}

Table run_optimize(const ExperimentConfig& c, int threads) {
  c.validate();
  Table t;
  t.columns = {"scheme", "L",     "snr_db",      "method",      "eta",  "tau",
               "eta_symbols", "tau_symbols", "clamped", "rate", "rate_se", "note"};
  for (std::size_t li = 0; li < c.L.size(); ++li) {
    const int L = c.L[li];
    GramSet set;
    if (c.grid) {
      set = draw_gram_set(Scheme::Fdd, L, c.samples,
                          stream_for(c.seed, kRateTag, point_key(li, 0, 0)), threads);
    }
    for (double db : c.snr_db) {
      const SystemParams p = c.params(L, db);
      for (Scheme scheme : c.schemes) {
        if (scheme == Scheme::NonCsi) continue;
        auto emit = [&](std::string_view method, const TrainingOptimum& o, Cell rate, Cell se,
                        std::string note) {
          t.rows.push_back({str(to_string(scheme)), num(L), db, str(method), o.eta, o.tau,
                            o.eta * p.Tc, o.tau * p.Tc, o.clamped, rate, se, note});
        };
        for (Regime r : {Regime::HighSnr, Regime::LowSnr}) {
          try {
            const TrainingOptimum o = analytic_optimum(scheme, p, r);
            if (c.grid) {
              const auto e = ergodic_rate_paired(scheme, p, o.eta, o.tau, set);
              emit(to_string(r), o, e.mean, e.std_err, "");
            } else {
              emit(to_string(r), o, std::monostate{}, std::monostate{}, "");
            }
          } catch (const PreconditionError& e) {
            t.rows.push_back({str(to_string(scheme)), num(L), db, str(to_string(r)),
                              std::monostate{}, std::monostate{}, std::monostate{},
                              std::monostate{}, std::monostate{}, std::monostate{},
                              std::monostate{}, str(e.what())});
          }
        }
        if (c.grid) {
          const GridResult g = grid_search(scheme, p, c.grid_spec, set, threads);
          emit("grid-search", g.optimum, g.estimate.mean, g.estimate.std_err,
               g.on_boundary ? "optimum on grid boundary" : "");
        }
      }
    }
  }
  return t;
}

}  // namespace swipt
