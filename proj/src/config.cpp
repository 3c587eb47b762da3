#include "swipt/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "swipt/errors.hpp"

namespace swipt {

std::string_view to_string(TrainingSource s) {
  switch (s) {
    case TrainingSource::AnalyticAuto: return "analytic-auto";
    case TrainingSource::AnalyticHigh: return "analytic-high";
    case TrainingSource::AnalyticLow: return "analytic-low";
    case TrainingSource::GridSearch: return "grid-search";
    case TrainingSource::Explicit: return "explicit";
  }
  return "?";
}

SystemParams ExperimentConfig::params(int L_, double db) const {
  SystemParams p;
  p.L = L_;
  p.P = P;
  p.N0 = P * std::pow(10.0, -db / 10.0);
  p.beta = beta;
  p.Tc = Tc;
  p.Pd = Pd;
  p.Pe = Pe;
  p.Pf = Pf;
  p.validate();
  return p;
}

namespace {

using Report = std::function<void(const std::string& key, const std::string& msg)>;

void check(const ExperimentConfig& c, const Report& fail) {
  if (c.L.empty()) fail("L", "at least one antenna count is required");
  if (c.snr_db.empty()) fail("snr_db", "at least one SNR value is required");
  if (c.schemes.empty()) fail("schemes", "scheme list is empty");
  for (double s : c.snr_db) {
    if (!std::isfinite(s)) fail("snr_db", "SNR values must be finite");
  }
  if (!(c.samples >= 1)) fail("samples", "must be at least 1");
  if (!(c.target_rate >= 0.0) || !std::isfinite(c.target_rate)) {
    fail("target_rate", "must be a finite non-negative rate");
  }
  if (c.grid_spec.coarse_step < 1) fail("grid_coarse_step", "must be >= 1");
  if (c.grid_spec.fine_step < 1) fail("grid_fine_step", "must be >= 1");
  if (c.alpha && !(*c.alpha > 0.0 && *c.alpha < 1.0)) fail("alpha", "must lie in (0, 1)");
  if (!c.alpha && c.alpha_policy == PolicyMode::Fixed && c.alpha_scales.empty()) {
    fail("alpha_scales", "fixed policy needs alpha or at least one scale");
  }
  for (double s : c.alpha_scales) {
    if (!(s > 0.0) || !std::isfinite(s)) fail("alpha_scales", "scales must be positive");
  }
  if (!(c.quadrature.abs_tol > 0.0)) fail("abs_tol", "must be positive");
  if (!(c.quadrature.tail_cut > 0.0 && c.quadrature.tail_cut < 1e-2)) {
    fail("tail_cut", "must lie in (0, 0.01)");
  }
  if (c.quadrature.max_depth < 1) fail("max_depth", "must be >= 1");

  const char* system_keys[] = {"beta", "P", "Tc", "Pd", "Pe", "Pf"};
  for (int L : c.L) {
    for (double db : c.snr_db) {
      SystemParams p;
      try {
        p = c.params(L, db);
      } catch (const PreconditionError& e) {
        std::string msg = e.what();
        std::string key = "L";
        for (const char* k : system_keys) {
          if (msg.rfind(std::string(k) + " ", 0) == 0) key = k;
        }
        fail(key, msg);
      }
      if (c.training != TrainingSource::Explicit) continue;
      for (Scheme s : c.schemes) {
        try {
          check_training(s, p, c.eta, c.tau);
        } catch (const PreconditionError& e) {
          fail(s == Scheme::Fdd && c.tau < double(L) / c.Tc ? "tau" : "eta",
               std::string(to_string(s)) + " at L=" + std::to_string(L) + ": " + e.what());
        }
      }
    }
  }
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

struct Parser {
  std::string source;
  int line = 0;

  [[noreturn]] void error(const std::string& msg) const {
    throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
  }

  double real(std::string_view v) const {
    double x = 0.0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || end != v.data() + v.size() || v.empty()) {
      error("expected a number, got '" + std::string(v) + "'");
    }
    return x;
  }

  template <class Int>
  Int integer(std::string_view v) const {
    Int x = 0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || end != v.data() + v.size() || v.empty()) {
      // Accept integral values written in exponent form, e.g. 1e6.
      double d = 0.5;
      const auto [end2, ec2] = std::from_chars(v.data(), v.data() + v.size(), d);
      if (ec2 != std::errc() || end2 != v.data() + v.size() || d != std::floor(d) || d < 0.0 ||
          d > 9.0e18) {
        error("expected an integer, got '" + std::string(v) + "'");
      }
      return static_cast<Int>(d);
    }
    return x;
  }

  bool boolean(std::string_view v) const {
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    error("expected true or false, got '" + std::string(v) + "'");
  }

  std::vector<double> reals(std::string_view v) const {
    std::vector<double> out;
    for (auto item : split(v)) {
      // start:step:stop expands to an inclusive range.
      if (item.find(':') != std::string_view::npos) {
        const auto a = item.find(':'), b = item.find(':', a + 1);
        if (b == std::string_view::npos) error("range must be start:step:stop");
        const double lo = real(trim(item.substr(0, a)));
        const double step = real(trim(item.substr(a + 1, b - a - 1)));
        const double hi = real(trim(item.substr(b + 1)));
        if (!(step > 0.0) || hi < lo) error("range needs a positive step and stop >= start");
        const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        if (count > 100000) error("range expands to too many points");
        for (long k = 0; k <= count; ++k) out.push_back(lo + k * step);
      } else {
        out.push_back(real(item));
      }
    }
    return out;
  }
};

}  // namespace

void ExperimentConfig::validate() const {
  check(*this, [](const std::string& key, const std::string& msg) {
    throw ConfigError(key + ": " + msg);
  });
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  ExperimentConfig c;
  Parser ps{std::string(source)};
  std::map<std::string, int> seen;  // "section.key" -> line
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++ps.line;
    std::string_view s = raw;
    if (const auto hash = s.find_first_of("#;"); hash != std::string_view::npos) {
      s = s.substr(0, hash);
    }
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') ps.error("unterminated section header");
      section = std::string(trim(s.substr(1, s.size() - 2)));
      if (section != "system" && section != "run" && section != "outage") {
        ps.error("unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) ps.error("expected key = value");
    if (section.empty()) ps.error("key outside of a section");
    const std::string key(trim(s.substr(0, eq)));
    const std::string_view v = trim(s.substr(eq + 1));
    if (v.empty()) ps.error("missing value for '" + key + "'");
    if (!seen.emplace(section + "." + key, ps.line).second) {
      ps.error("duplicate key '" + key + "'");
    }

    if (section == "system") {
      if (key == "L") {
        c.L.clear();
        for (auto item : split(v)) c.L.push_back(ps.integer<int>(item));
      } else if (key == "snr_db") {
        c.snr_db = ps.reals(v);
      } else if (key == "beta") {
        c.beta = ps.real(v);
      } else if (key == "P") {
        c.P = ps.real(v);
      } else if (key == "Tc") {
        c.Tc = ps.integer<int>(v);
      } else if (key == "Pd") {
        c.Pd = ps.real(v);
      } else if (key == "Pe") {
        c.Pe = ps.real(v);
      } else if (key == "Pf") {
        c.Pf = ps.real(v);
      } else {
        ps.error("unknown key '" + key + "' in [system]");
      }
    } else if (section == "run") {
      if (key == "schemes") {
        c.schemes.clear();
        if (v != "none") {
          for (auto item : split(v)) {
            try {
              c.schemes.push_back(scheme_from_string(item));
            } catch (const PreconditionError& e) {
              ps.error(e.what());
            }
          }
        }
      } else if (key == "samples") {
        c.samples = ps.integer<std::int64_t>(v);
      } else if (key == "seed") {
        c.seed = ps.integer<std::uint64_t>(v);
      } else if (key == "target_rate") {
        c.target_rate = ps.real(v);
      } else if (key == "training") {
        if (v == "analytic-auto") c.training = TrainingSource::AnalyticAuto;
        else if (v == "analytic-high") c.training = TrainingSource::AnalyticHigh;
        else if (v == "analytic-low") c.training = TrainingSource::AnalyticLow;
        else if (v == "grid-search") c.training = TrainingSource::GridSearch;
        else if (v == "explicit") c.training = TrainingSource::Explicit;
        else ps.error("unknown training source '" + std::string(v) + "'");
      } else if (key == "eta") {
        c.eta = ps.real(v);
      } else if (key == "tau") {
        c.tau = ps.real(v);
      } else if (key == "grid") {
        c.grid = ps.boolean(v);
      } else if (key == "grid_coarse_step") {
        c.grid_spec.coarse_step = ps.integer<int>(v);
      } else if (key == "grid_fine_step") {
        c.grid_spec.fine_step = ps.integer<int>(v);
      } else if (key == "grid_refine") {
        c.grid_spec.refine = ps.boolean(v);
      } else if (key == "out") {
        c.out = std::string(v);
      } else {
        ps.error("unknown key '" + key + "' in [run]");
      }
    } else {
      if (key == "alpha_policy") {
        if (v == "fixed") c.alpha_policy = PolicyMode::Fixed;
        else if (v == "minimal") c.alpha_policy = PolicyMode::Minimal;
        else ps.error("alpha_policy must be fixed or minimal");
      } else if (key == "alpha") {
        c.alpha = ps.real(v);
      } else if (key == "alpha_scales") {
        c.alpha_scales = ps.reals(v);
      } else if (key == "abs_tol") {
        c.quadrature.abs_tol = ps.real(v);
      } else if (key == "tail_cut") {
        c.quadrature.tail_cut = ps.real(v);
      } else if (key == "max_depth") {
        c.quadrature.max_depth = ps.integer<int>(v);
      } else {
        ps.error("unknown key '" + key + "' in [outage]");
      }
    }
  }

  check(c, [&](const std::string& key, const std::string& msg) {
    for (const auto& [name, line] : seen) {
      if (name.substr(name.find('.') + 1) == key) {
        throw ConfigError(ps.source + ":" + std::to_string(line) + ": " + key + ": " + msg);
      }
    }
    throw ConfigError(ps.source + ": " + key + " (default): " + msg);
  });
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError(path + ": cannot open config file");
  std::ostringstream text;
  text << f.rdbuf();
  return parse_config(text.str(), path);
}

}  // namespace swipt
