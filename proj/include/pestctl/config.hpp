#pragma once

/// @file config.hpp
/// Experiment configuration files.
///
/// Flat `key = value` lines grouped under `[section]` headers; `#` starts a
/// comment. Strategies are repeated `[strategy]` sections. A `[manifest]`
/// section is accepted and ignored, so run manifests parse back as configs.
///
///   [model]      alpha beta gamma delta C kappa ell mu
///   [grid]       resolution domain
///   [time]       t_start t_end cfl_safety reaction_dt_factor max_retries
///   [initial]    u0_amplitude u0_support w0_amplitude w0_support
///   [output]     snapshot_times convolution monitors
///   [cost]       t_begin t_end region
///   [calibrate]  mu_values target resolution
///   [optimize]   support budget evals width_min resolution
///   [compare]    include_no_control
///   [strategy]   name support region window budget t_start t_end
///   [run]        threads seed
///
/// Reals accept a `pi` factor: `12pi`, `0.25 pi`, `pi`. Regions are written
/// `ball(cx, cy, r)` or `rect(x_lo, x_hi, y_lo, y_hi)`; strategy supports may also be
/// `ball` (the natality ball), `rect` (the harm rectangle) or `custom` with a
/// `region` key. Windows are `I0`..`I3` or `phase(phase, width)`.
///
/// Required: `[model] mu` or a `[calibrate]` section, `[grid] resolution`,
/// `[time] t_end`.

#include "pestctl/control.hpp"
#include "pestctl/cost_spec.hpp"
#include "pestctl/error.hpp"
#include "pestctl/field_io.hpp"
#include "pestctl/fields.hpp"
#include "pestctl/reaction.hpp"
#include "pestctl/simulator.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace pestctl {

struct GridSpec {
  std::size_t resolution = 256;
  std::optional<Rect> domain;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct TimeSpec {
  double t_start = 0.0;
  double t_end = 12.0 * std::numbers::pi;
  double cfl_safety = 0.9;
  double reaction_dt_factor = 0.1;
  int max_retries = 3;
  friend bool operator==(const TimeSpec&, const TimeSpec&) = default;
};

struct OutputSpec {
  std::vector<double> snapshot_times;
  ConvolutionMethod convolution = ConvolutionMethod::fft;
  bool monitors = true;
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

/// The prey-mass cost: integral of w over `region` (whole domain when unset) and
/// [t_begin, t_end].
struct CostDescriptor {
  double t_begin = 4.0 * std::numbers::pi;
  double t_end = 12.0 * std::numbers::pi;
  std::optional<Region> region = harm_rectangle();
  friend bool operator==(const CostDescriptor&, const CostDescriptor&) = default;
};

struct CalibrateSpec {
  bool present = false;
  std::vector<double> mu_values{0.05, 0.1, 0.25, 0.5, 1.0};
  double target = 1866.98;
  std::size_t resolution = 128; ///< 0 means the run resolution
  friend bool operator==(const CalibrateSpec&, const CalibrateSpec&) = default;
};

struct OptimizeSpec {
  Region support = harm_rectangle();
  double budget = 1000.0;
  std::size_t evals = 40;
  double width_min = 0.1;
  std::size_t resolution = 0; ///< 0 means the run resolution
  friend bool operator==(const OptimizeSpec&, const OptimizeSpec&) = default;
};

struct RunSpec {
  unsigned threads = 0; ///< 0: PESTCTL_THREADS, else hardware concurrency
  std::uint64_t seed = 0;
  friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

struct ExperimentConfig {
  ModelParams model;
  bool mu_given = false;
  GridSpec grid;
  TimeSpec time;
  InitialSpec initial;
  OutputSpec output;
  CostDescriptor cost;
  CalibrateSpec calibrate;
  OptimizeSpec optimize;
  std::vector<ReleaseStrategy> strategies;
  bool include_no_control = true;
  RunSpec run;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

inline CostSpec make_cost(const CostDescriptor& d) {
  CostSpec c;
  c.name = "prey_mass";
  c.t_begin = d.t_begin;
  c.t_end = d.t_end;
  c.region = d.region;
  return c;
}

/// Simulation setup; `strategies` is left empty (subcommands pick the releases).
inline SimConfig to_sim_config(const ExperimentConfig& e) {
  SimConfig s;
  s.params = e.model;
  s.resolution = e.grid.resolution;
  s.domain = e.grid.domain;
  s.initial = e.initial;
  s.t_start = e.time.t_start;
  s.t_end = e.time.t_end;
  s.cfl_safety = e.time.cfl_safety;
  s.reaction_dt_factor = e.time.reaction_dt_factor;
  s.max_retries = e.time.max_retries;
  s.snapshot_times = e.output.snapshot_times;
  s.monitors = e.output.monitors;
  s.convolution = e.output.convolution;
  s.costs = {make_cost(e.cost)};
  return s;
}

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Plain number, or a number followed by `pi` / `*pi`, or `pi` alone.
inline double parse_real(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  const std::string l = lower(s);
  if (l.size() >= 2 && l.compare(l.size() - 2, 2, "pi") == 0) {
    std::string head = s.substr(0, s.size() - 2);
    if (!head.empty() && head.back() == '*') head.pop_back();
    if (head.empty() || head == "+") return std::numbers::pi;
    if (head == "-") return -std::numbers::pi;
    return parse_number(head) * std::numbers::pi;
  }
  return parse_number(s);
}

inline std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

inline std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> v;
  for (const auto& item : split_list(text)) v.push_back(parse_real(item));
  return v;
}

// name(a, b, ...) -> {name, [a, b, ...]}
inline std::pair<std::string, std::vector<double>> parse_call(std::string_view text) {
  const std::string s = trim(text);
  const auto open = s.find('(');
  if (s.empty() || open == std::string::npos || s.back() != ')') throw std::invalid_argument("expected name(...)");
  return {lower(trim(s.substr(0, open))), parse_real_list(std::string_view(s).substr(open + 1, s.size() - open - 2))};
}

inline Region parse_region(std::string_view text) {
  const auto [name, args] = parse_call(text);
  if (name == "ball") {
    if (args.size() != 3) throw std::invalid_argument("ball needs (cx, cy, r)");
    return make_ball(args[0], args[1], args[2]);
  }
  if (name == "rect") {
    if (args.size() != 4) throw std::invalid_argument("rect needs (x_lo, x_hi, y_lo, y_hi)");
    return make_rect(args[0], args[1], args[2], args[3]);
  }
  throw std::invalid_argument("unknown region '" + name + "'");
}

inline bool parse_bool(std::string_view text) {
  const std::string l = lower(trim(text));
  if (l == "true" || l == "yes" || l == "on" || l == "1") return true;
  if (l == "false" || l == "no" || l == "off" || l == "0") return false;
  throw std::invalid_argument("expected true or false");
}

inline std::size_t parse_count(std::string_view text) {
  const double v = parse_real(text);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) throw std::invalid_argument("expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

inline std::string format_region(const Region& r) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Ball>)
          return "ball(" + format_number(x.cx) + ", " + format_number(x.cy) + ", " + format_number(x.radius) + ")";
        else
          return "rect(" + format_number(x.x_lo) + ", " + format_number(x.x_hi) + ", " + format_number(x.y_lo) +
                 ", " + format_number(x.y_hi) + ")";
      },
      r);
}

inline std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_number(v[i]);
  }
  return s;
}

struct Line {
  std::size_t number;
  std::string key;
  std::string value;
};

struct Section {
  std::string name;
  std::size_t line;
  std::vector<Line> entries;
};

} // namespace detail

inline std::string format_window(const TimeWindow& w) {
  switch (w.kind) {
  case WindowKind::I0: return "I0";
  case WindowKind::I1: return "I1";
  case WindowKind::I2: return "I2";
  case WindowKind::I3: return "I3";
  case WindowKind::phase: break;
  }
  return "phase(" + format_number(w.phase) + ", " + format_number(w.width) + ")";
}

/// Parses configuration text. Every problem found is reported in one ConfigError.
inline ExperimentConfig parse_config(std::string_view text) {
  using namespace detail;
  std::vector<std::string> errs;
  std::vector<Section> sections;

  {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
      ++n;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      const std::string line = trim(raw);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          errs.push_back("line " + std::to_string(n) + ": malformed section header");
          continue;
        }
        sections.push_back({lower(trim(std::string_view(line).substr(1, line.size() - 2))), n, {}});
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        errs.push_back("line " + std::to_string(n) + ": expected key = value");
        continue;
      }
      if (sections.empty()) {
        errs.push_back("line " + std::to_string(n) + ": key outside any section");
        continue;
      }
      sections.back().entries.push_back({n, trim(std::string_view(line).substr(0, eq)),
                                         trim(std::string_view(line).substr(eq + 1))});
    }
  }

  ExperimentConfig cfg;
  bool have_resolution = false, have_t_end = false;
  std::set<std::string> seen_sections;

  for (const auto& sec : sections) {
    if (sec.name != "strategy" && !seen_sections.insert(sec.name).second)
      errs.push_back("line " + std::to_string(sec.line) + ": section [" + sec.name + "] appears twice");
    if (sec.name == "manifest") continue;

    std::set<std::string> seen_keys;
    ReleaseStrategy strat;
    strat.name = "strategy" + std::to_string(cfg.strategies.size() + 1);
    std::string support_kind = "rect";
    std::optional<Region> custom_region;
    std::optional<double> win_t0, win_t1;
    std::string window_text = "I0";

    if (sec.name == "calibrate") cfg.calibrate.present = true;

    for (const auto& e : sec.entries) {
      const std::string where = "line " + std::to_string(e.number) + ": [" + sec.name + "] " + e.key;
      if (!seen_keys.insert(e.key).second) {
        errs.push_back(where + " given twice");
        continue;
      }
      auto real = [&] { return parse_real(e.value); };
      bool known = true;
      try {
        if (sec.name == "model") {
          double* target = nullptr;
          if (e.key == "alpha") target = &cfg.model.alpha;
          else if (e.key == "beta") target = &cfg.model.beta;
          else if (e.key == "gamma") target = &cfg.model.gamma;
          else if (e.key == "delta") target = &cfg.model.delta;
          else if (e.key == "C") target = &cfg.model.C;
          else if (e.key == "kappa") target = &cfg.model.kappa;
          else if (e.key == "ell") target = &cfg.model.ell;
          else if (e.key == "mu") {
            target = &cfg.model.mu;
            cfg.mu_given = true;
          } else known = false;
          if (target) *target = real();
        } else if (sec.name == "grid") {
          if (e.key == "resolution") {
            cfg.grid.resolution = parse_count(e.value);
            have_resolution = true;
          } else if (e.key == "domain") {
            const Region r = parse_region(e.value);
            if (!std::holds_alternative<Rect>(r)) throw std::invalid_argument("domain must be a rect(...)");
            cfg.grid.domain = std::get<Rect>(r);
          } else known = false;
        } else if (sec.name == "time") {
          if (e.key == "t_start") cfg.time.t_start = real();
          else if (e.key == "t_end") {
            cfg.time.t_end = real();
            have_t_end = true;
          } else if (e.key == "cfl_safety") cfg.time.cfl_safety = real();
          else if (e.key == "reaction_dt_factor") cfg.time.reaction_dt_factor = real();
          else if (e.key == "max_retries") cfg.time.max_retries = static_cast<int>(parse_count(e.value));
          else known = false;
        } else if (sec.name == "initial") {
          if (e.key == "u0_amplitude") cfg.initial.u0_amplitude = real();
          else if (e.key == "w0_amplitude") cfg.initial.w0_amplitude = real();
          else if (e.key == "u0_support") cfg.initial.u0_support = parse_region(e.value);
          else if (e.key == "w0_support") cfg.initial.w0_support = parse_region(e.value);
          else known = false;
        } else if (sec.name == "output") {
          if (e.key == "snapshot_times") cfg.output.snapshot_times = parse_real_list(e.value);
          else if (e.key == "convolution") {
            const std::string v = lower(e.value);
            if (v == "fft") cfg.output.convolution = ConvolutionMethod::fft;
            else if (v == "direct") cfg.output.convolution = ConvolutionMethod::direct;
            else throw std::invalid_argument("expected fft or direct");
          } else if (e.key == "monitors") cfg.output.monitors = parse_bool(e.value);
          else known = false;
        } else if (sec.name == "cost") {
          if (e.key == "t_begin") cfg.cost.t_begin = real();
          else if (e.key == "t_end") cfg.cost.t_end = real();
          else if (e.key == "region") {
            if (lower(e.value) == "domain") cfg.cost.region.reset();
            else cfg.cost.region = parse_region(e.value);
          } else known = false;
        } else if (sec.name == "calibrate") {
          if (e.key == "mu_values") cfg.calibrate.mu_values = parse_real_list(e.value);
          else if (e.key == "target") cfg.calibrate.target = real();
          else if (e.key == "resolution") cfg.calibrate.resolution = parse_count(e.value);
          else known = false;
        } else if (sec.name == "optimize") {
          if (e.key == "support") {
            const std::string v = lower(e.value);
            cfg.optimize.support = v == "ball" ? natality_ball() : v == "rect" ? harm_rectangle() : parse_region(e.value);
          } else if (e.key == "budget") cfg.optimize.budget = real();
          else if (e.key == "evals") cfg.optimize.evals = parse_count(e.value);
          else if (e.key == "width_min") cfg.optimize.width_min = real();
          else if (e.key == "resolution") cfg.optimize.resolution = parse_count(e.value);
          else known = false;
        } else if (sec.name == "compare") {
          if (e.key == "include_no_control") cfg.include_no_control = parse_bool(e.value);
          else known = false;
        } else if (sec.name == "run") {
          if (e.key == "threads") cfg.run.threads = static_cast<unsigned>(parse_count(e.value));
          else if (e.key == "seed") cfg.run.seed = static_cast<std::uint64_t>(parse_count(e.value));
          else known = false;
        } else if (sec.name == "strategy") {
          if (e.key == "name") strat.name = e.value;
          else if (e.key == "support") {
            support_kind = lower(e.value);
            if (support_kind != "ball" && support_kind != "rect" && support_kind != "custom") {
              custom_region = parse_region(e.value);
              support_kind = "inline";
            }
          } else if (e.key == "region") custom_region = parse_region(e.value);
          else if (e.key == "window") window_text = e.value;
          else if (e.key == "budget") strat.budget = real();
          else if (e.key == "t_start") win_t0 = real();
          else if (e.key == "t_end") win_t1 = real();
          else known = false;
        } else {
          errs.push_back("line " + std::to_string(sec.line) + ": unknown section [" + sec.name + "]");
          break;
        }
      } catch (const std::exception& ex) {
        errs.push_back(where + ": " + ex.what());
        continue;
      }
      if (!known) errs.push_back(where + ": unknown key");
    }

    if (sec.name == "strategy") {
      const std::string where = "line " + std::to_string(sec.line) + ": [strategy] " + strat.name;
      try {
        if (support_kind == "ball") strat.support = natality_ball();
        else if (support_kind == "rect") strat.support = harm_rectangle();
        else if (!custom_region) throw std::invalid_argument("custom support needs a region key");
        else strat.support = *custom_region;
        const double t0 = win_t0.value_or(4.0 * std::numbers::pi), t1 = win_t1.value_or(12.0 * std::numbers::pi);
        const std::string w = trim(window_text);
        if (w.size() == 2 && (w[0] == 'I' || w[0] == 'i') && w[1] >= '0' && w[1] <= '3') {
          strat.window = TimeWindow::seasonal(w[1] - '0', t0, t1);
        } else {
          const auto [name, args] = parse_call(w);
          if (name != "phase" || args.size() != 2) throw std::invalid_argument("window must be I0..I3 or phase(phase, width)");
          strat.window = TimeWindow::phase_window(args[0], args[1], t0, t1);
        }
        if (!(strat.budget >= 0.0)) throw std::invalid_argument("budget must be nonnegative");
        if (!(t1 > t0)) throw std::invalid_argument("window t_end must exceed t_start");
        cfg.strategies.push_back(strat);
      } catch (const std::exception& ex) {
        errs.push_back(where + ": " + ex.what());
      }
    }
  }

  // Presence and range checks.
  if (!cfg.mu_given && !cfg.calibrate.present)
    errs.push_back("missing required key: [model] mu (or a [calibrate] section)");
  if (!have_resolution) errs.push_back("missing required key: [grid] resolution");
  if (!have_t_end) errs.push_back("missing required key: [time] t_end");

  auto positive = [&](const char* key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) errs.push_back(std::string(key) + " must be a finite positive number");
  };
  positive("[model] alpha", cfg.model.alpha);
  positive("[model] beta", cfg.model.beta);
  positive("[model] gamma", cfg.model.gamma);
  positive("[model] delta", cfg.model.delta);
  positive("[model] C", cfg.model.C);
  positive("[model] kappa", cfg.model.kappa);
  positive("[model] ell", cfg.model.ell);
  positive("[model] mu", cfg.model.mu);
  if (have_resolution) {
    const std::size_t r = cfg.grid.resolution;
    if (r < 4 || (r & (r - 1)) != 0) errs.push_back("[grid] resolution must be a power of two >= 4");
  }
  if (!(cfg.time.t_end > cfg.time.t_start)) errs.push_back("[time] t_end must exceed [time] t_start");
  if (!(cfg.time.cfl_safety > 0.0 && cfg.time.cfl_safety <= 1.0)) errs.push_back("[time] cfl_safety must lie in (0, 1]");
  positive("[time] reaction_dt_factor", cfg.time.reaction_dt_factor);
  if (cfg.initial.u0_amplitude < 0.0) errs.push_back("[initial] u0_amplitude must be nonnegative");
  if (cfg.initial.w0_amplitude < 0.0) errs.push_back("[initial] w0_amplitude must be nonnegative");
  if (!(cfg.cost.t_end > cfg.cost.t_begin)) errs.push_back("[cost] t_end must exceed [cost] t_begin");
  if (cfg.cost.t_begin < cfg.time.t_start || cfg.cost.t_end > cfg.time.t_end)
    errs.push_back("[cost] horizon must lie inside the simulated time interval");
  if (cfg.calibrate.present) {
    if (cfg.calibrate.mu_values.empty()) errs.push_back("[calibrate] mu_values must not be empty");
    for (double m : cfg.calibrate.mu_values)
      if (!(m > 0.0)) errs.push_back("[calibrate] mu_values must all be positive");
    if (cfg.calibrate.resolution != 0 && cfg.calibrate.resolution < 4)
      errs.push_back("[calibrate] resolution must be 0 or at least 4");
  }
  if (cfg.optimize.budget < 0.0) errs.push_back("[optimize] budget must be nonnegative");
  if (!(cfg.optimize.width_min > 0.0)) errs.push_back("[optimize] width_min must be positive");
  if (cfg.optimize.evals < 4) errs.push_back("[optimize] evals must be at least 4");
  for (double t : cfg.output.snapshot_times)
    if (t < cfg.time.t_start || t > cfg.time.t_end) errs.push_back("[output] snapshot_times must lie in [t_start, t_end]");

  if (!errs.empty()) throw ConfigError(errs);
  return cfg;
}

inline ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Text that parse_config maps back to an equal ExperimentConfig.
inline std::string serialize(const ExperimentConfig& c) {
  using detail::format_list;
  using detail::format_region;
  std::ostringstream os;
  auto kv = [&](const char* k, const std::string& v) { os << k << " = " << v << '\n'; };
  auto num = [&](const char* k, double v) { kv(k, format_number(v)); };

  os << "[model]\n";
  num("alpha", c.model.alpha);
  num("beta", c.model.beta);
  num("gamma", c.model.gamma);
  num("delta", c.model.delta);
  num("C", c.model.C);
  num("kappa", c.model.kappa);
  num("ell", c.model.ell);
  if (c.mu_given) num("mu", c.model.mu);

  os << "\n[grid]\n";
  kv("resolution", std::to_string(c.grid.resolution));
  if (c.grid.domain) kv("domain", format_region(*c.grid.domain));

  os << "\n[time]\n";
  num("t_start", c.time.t_start);
  num("t_end", c.time.t_end);
  num("cfl_safety", c.time.cfl_safety);
  num("reaction_dt_factor", c.time.reaction_dt_factor);
  kv("max_retries", std::to_string(c.time.max_retries));

  os << "\n[initial]\n";
  num("u0_amplitude", c.initial.u0_amplitude);
  kv("u0_support", format_region(c.initial.u0_support));
  num("w0_amplitude", c.initial.w0_amplitude);
  kv("w0_support", format_region(c.initial.w0_support));

  os << "\n[output]\n";
  if (!c.output.snapshot_times.empty()) kv("snapshot_times", format_list(c.output.snapshot_times));
  kv("convolution", c.output.convolution == ConvolutionMethod::fft ? "fft" : "direct");
  kv("monitors", c.output.monitors ? "true" : "false");

  os << "\n[cost]\n";
  num("t_begin", c.cost.t_begin);
  num("t_end", c.cost.t_end);
  kv("region", c.cost.region ? format_region(*c.cost.region) : "domain");

  if (c.calibrate.present) {
    os << "\n[calibrate]\n";
    kv("mu_values", format_list(c.calibrate.mu_values));
    num("target", c.calibrate.target);
    kv("resolution", std::to_string(c.calibrate.resolution));
  }

  os << "\n[optimize]\n";
  kv("support", format_region(c.optimize.support));
  num("budget", c.optimize.budget);
  kv("evals", std::to_string(c.optimize.evals));
  num("width_min", c.optimize.width_min);
  kv("resolution", std::to_string(c.optimize.resolution));

  os << "\n[compare]\n";
  kv("include_no_control", c.include_no_control ? "true" : "false");

  os << "\n[run]\n";
  kv("threads", std::to_string(c.run.threads));
  kv("seed", std::to_string(c.run.seed));

  for (const auto& s : c.strategies) {
    os << "\n[strategy]\n";
    kv("name", s.name);
    if (s.support == natality_ball()) kv("support", "ball");
    else if (s.support == harm_rectangle()) kv("support", "rect");
    else {
      kv("support", "custom");
      kv("region", format_region(s.support));
    }
    kv("window", format_window(s.window));
    num("budget", s.budget);
    num("t_start", s.window.t_start);
    num("t_end", s.window.t_end);
  }
  return os.str();
}

} // namespace pestctl
