// pestctl: simulate, compare, calibrate, optimize and audit release strategies.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure, 3 I/O error.

#include "pestctl/pestctl.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace pestctl;

namespace {

struct Options {
  std::string config_path;
  std::optional<std::size_t> resolution;
  std::optional<double> mu;
  std::string out_dir = "pestctl_out";
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  std::string strategy;
};

unsigned resolve_threads(const Options& o, const ExperimentConfig& c) {
  if (o.threads && *o.threads > 0) return *o.threads;
  if (c.run.threads > 0) return c.run.threads;
  if (const char* env = std::getenv("PESTCTL_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      throw ConfigError("PESTCTL_THREADS must be a positive integer");
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentConfig load(const Options& o) {
  if (o.config_path.empty()) throw ConfigError("--config is required");
  ExperimentConfig c = parse_config_file(o.config_path);
  if (o.resolution) {
    const std::size_t r = *o.resolution;
    if (r < 4 || (r & (r - 1)) != 0) throw ConfigError("--resolution must be a power of two >= 4");
    c.grid.resolution = r;
  }
  if (o.mu) {
    if (!(*o.mu > 0.0)) throw ConfigError("--mu must be positive");
    c.model.mu = *o.mu;
    c.mu_given = true;
  }
  if (o.seed) c.run.seed = *o.seed;
  return c;
}

std::string snapshot_tag(double t) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "t%09.4f", t);
  return buf;
}

// Runs the configured calibration sweep when mu was not given; returns the chosen mu.
std::optional<CalibrationRow> resolve_mu(ExperimentConfig& c, unsigned threads, const fs::path& out) {
  if (c.mu_given) return std::nullopt;
  SimConfig sc = to_sim_config(c);
  if (c.calibrate.resolution != 0) sc.resolution = c.calibrate.resolution;
  sc.monitors = false;
  auto rows = calibrate(sc, c.calibrate.mu_values, c.calibrate.target, threads);
  write_csv_file(out / "calibration.csv", [&](std::ostream& os) { write_calibration_csv(os, rows); });
  if (!rows.front().error.empty()) throw NumericalFailure("calibration failed: " + rows.front().error);
  c.model.mu = rows.front().mu;
  std::cerr << "calibrated mu = " << format_number(rows.front().mu) << " (cost " << format_number(rows.front().cost)
            << " at " << sc.resolution << "^2)\n";
  return rows.front();
}

void note_calibration(ManifestInfo& info, const std::optional<CalibrationRow>& cal) {
  if (!cal) return;
  info.extra.emplace_back("calibrated_mu", format_number(cal->mu));
  info.extra.emplace_back("calibrated_cost", format_number(cal->cost));
}

// Config strategies when present, else the eight seasonal ones.
std::vector<Candidate> candidates_from(const ExperimentConfig& c) {
  std::vector<Candidate> out;
  if (c.include_no_control) out.push_back({"none", {}});
  const auto strategies = c.strategies.empty() ? seasonal_strategies() : c.strategies;
  for (const auto& s : strategies) out.push_back({s.name, {s}});
  return out;
}

int cmd_simulate(const Options& o) {
  const auto wall0 = std::chrono::steady_clock::now();
  ExperimentConfig c = load(o);
  const ExperimentConfig echo = c;
  const fs::path out = o.out_dir;
  const unsigned threads = resolve_threads(o, c);
  const auto cal = resolve_mu(c, threads, out);

  SimConfig sc = to_sim_config(c);
  if (!o.strategy.empty() && o.strategy != "none") {
    std::vector<ReleaseStrategy> pool = c.strategies;
    for (auto& s : seasonal_strategies()) pool.push_back(s);
    auto it = std::find_if(pool.begin(), pool.end(), [&](const auto& s) { return s.name == o.strategy; });
    if (it == pool.end()) throw ConfigError("unknown strategy '" + o.strategy + "'");
    sc.strategies = {*it};
  }
  SimOutput res = Simulator(sc).run();

  write_csv_file(out / "series.csv", [&](std::ostream& os) { write_series_csv(os, res); });
  std::string index = "requested,t,u_file,w_file\n";
  if (!res.snapshots.empty()) fs::create_directories(out / "snapshots");
  for (const auto& s : res.snapshots) {
    const std::string tag = snapshot_tag(s.requested);
    const std::string fu = "snapshots/u_" + tag + ".field", fw = "snapshots/w_" + tag + ".field";
    write_field(out / fu, s.u);
    write_field(out / fw, s.w);
    index += format_number(s.requested) + ',' + format_number(s.t) + ',' + fu + ',' + fw + '\n';
  }
  write_text_file(out / "snapshots.csv", index);

  ManifestInfo info;
  info.command = "simulate" + (o.strategy.empty() ? std::string() : " --strategy " + o.strategy);
  info.stats = res.stats;
  info.monitors = res.monitors;
  note_calibration(info, cal);
  info.extra.emplace_back("cost", format_number(res.costs.at(0)));
  info.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  write_text_file(out / "manifest.cfg", format_manifest(echo, info));

  std::cout << "cost = " << format_number(res.costs.at(0)) << "\n";
  for (const auto& v : res.monitors.verdicts)
    std::cout << "monitor " << v.name << ": " << (v.pass ? "pass" : "FAIL") << "\n";
  return 0;
}

int cmd_compare(const Options& o) {
  const auto wall0 = std::chrono::steady_clock::now();
  ExperimentConfig c = load(o);
  const ExperimentConfig echo = c;
  const fs::path out = o.out_dir;
  const unsigned threads = resolve_threads(o, c);
  const auto cal = resolve_mu(c, threads, out);

  SimConfig sc = to_sim_config(c);
  sc.monitors = false;
  const auto rows = compare_strategies(candidates_from(c), sc, threads);
  write_csv_file(out / "comparison.csv", [&](std::ostream& os) { write_comparison_csv(os, rows); });

  ManifestInfo info;
  info.command = "compare";
  note_calibration(info, cal);
  info.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  write_text_file(out / "manifest.cfg", format_manifest(echo, info));

  bool failed = false;
  for (const auto& r : rows) {
    std::cout << (r.best ? "* " : "  ") << r.name << "  " << (r.error.empty() ? format_number(r.cost) : r.error)
              << "\n";
    failed = failed || !r.error.empty();
  }
  return failed ? 2 : 0;
}

int cmd_calibrate(const Options& o) {
  ExperimentConfig c = load(o);
  const fs::path out = o.out_dir;
  SimConfig sc = to_sim_config(c);
  if (!o.resolution && c.calibrate.resolution != 0) sc.resolution = c.calibrate.resolution;
  sc.monitors = false;
  std::vector<double> values = c.calibrate.mu_values;
  if (o.mu) values = {*o.mu};
  const auto rows = calibrate(sc, values, c.calibrate.target, resolve_threads(o, c));
  write_csv_file(out / "calibration.csv", [&](std::ostream& os) { write_calibration_csv(os, rows); });
  for (const auto& r : rows)
    std::cout << "mu " << format_number(r.mu) << "  cost " << format_number(r.cost) << "  mismatch "
              << format_number(r.mismatch) << "\n";
  if (!rows.front().error.empty()) throw NumericalFailure(rows.front().error);
  std::cout << "best mu = " << format_number(rows.front().mu) << "\n";
  return 0;
}

int cmd_optimize(const Options& o) {
  const auto wall0 = std::chrono::steady_clock::now();
  ExperimentConfig c = load(o);
  const ExperimentConfig echo = c;
  const fs::path out = o.out_dir;
  const unsigned threads = resolve_threads(o, c);
  const auto cal = resolve_mu(c, threads, out);

  SimConfig sc = to_sim_config(c);
  sc.monitors = false;
  if (c.optimize.resolution != 0 && !o.resolution) sc.resolution = c.optimize.resolution;
  const auto family =
      phase_window_family(c.optimize.support, c.optimize.budget, c.optimize.width_min, c.cost.t_begin, c.cost.t_end);
  const auto res = optimize(family, sc, c.optimize.evals, c.run.seed, threads);
  write_csv_file(out / "trace.csv", [&](std::ostream& os) { write_trace_csv(os, res, family.names); });

  ManifestInfo info;
  info.command = "optimize";
  note_calibration(info, cal);
  info.extra.emplace_back("evaluations", std::to_string(res.evaluations));
  info.extra.emplace_back("best_phase", format_number(res.best_params.at(0)));
  info.extra.emplace_back("best_width", format_number(res.best_params.at(1)));
  info.extra.emplace_back("best_cost", format_number(res.best_cost));
  info.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  write_text_file(out / "manifest.cfg", format_manifest(echo, info));

  std::cout << "best phase = " << format_number(res.best_params[0]) << "\n"
            << "best width = " << format_number(res.best_params[1]) << "\n"
            << "best cost = " << format_number(res.best_cost) << "\n"
            << "evaluations = " << res.evaluations << "\n";
  return 0;
}

int cmd_audit(const Options& o, bool write_file) {
  ExperimentConfig c = load(o);
  SimConfig sc = to_sim_config(c);
  AuditOptions opt;
  opt.seed = c.run.seed == 0 ? 1 : c.run.seed;
  const auto strategies = c.strategies.empty() ? seasonal_strategies() : c.strategies;
  const HypothesisReport r = audit(c.model, sc.numerical_domain(), strategies, opt);
  const std::string text = format_report(r);
  std::cout << text;
  if (write_file) write_text_file(fs::path(o.out_dir) / "audit.txt", text);
  return r.all_pass() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controlled predator-prey simulator and release-strategy optimiser"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "Configuration file")->required();
    sub->add_option("--resolution", o.resolution, "Cells per axis (overrides [grid] resolution)");
    sub->add_option("--mu", o.mu, "Prey diffusivity (overrides [model] mu)");
    sub->add_option("--out", o.out_dir, "Output directory");
    sub->add_option("--threads", o.threads, "Worker threads (fallback: PESTCTL_THREADS)");
    sub->add_option("--seed", o.seed, "Optimiser simplex jitter seed (0 disables)");
  };
  auto* simulate = app.add_subcommand("simulate", "Run one simulation");
  common(simulate);
  simulate->add_option("--strategy", o.strategy, "Strategy name (config or q0B..q3R; default none)");
  auto* compare = app.add_subcommand("compare", "Rank the configured strategies by cost");
  common(compare);
  auto* calib = app.add_subcommand("calibrate", "Sweep mu against the target uncontrolled cost");
  common(calib);
  auto* optim = app.add_subcommand("optimize", "Nelder-Mead over a phase window");
  common(optim);
  auto* aud = app.add_subcommand("audit", "Sampled checks of the model's structural bounds");
  common(aud);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*simulate) return cmd_simulate(o);
    if (*compare) return cmd_compare(o);
    if (*calib) return cmd_calibrate(o);
    if (*optim) return cmd_optimize(o);
    if (*aud) return cmd_audit(o, aud->count("--out") > 0);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error:\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
    return 1;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
