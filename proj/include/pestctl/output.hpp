#pragma once

/// @file output.hpp
/// CSV tables and run manifests. Numbers are written with 17 significant digits
/// through format_number, so files are locale independent and byte-stable.

#include "pestctl/config.hpp"
#include "pestctl/error.hpp"
#include "pestctl/field_io.hpp"
#include "pestctl/search.hpp"
#include "pestctl/simulator.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#ifndef PESTCTL_VERSION
#define PESTCTL_VERSION "0.0.0"
#endif

namespace pestctl {

inline constexpr const char* version() noexcept { return PESTCTL_VERSION; }

namespace detail {

// Quotes a CSV cell when it contains a separator or a quote.
inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

} // namespace detail

inline void write_series_csv(std::ostream& os, const SimOutput& out) {
  os << "t,mass_u,mass_w,linf_u,linf_w,running_cost\n";
  for (const auto& s : out.series)
    os << format_number(s.t) << ',' << format_number(s.mass_u) << ',' << format_number(s.mass_w) << ','
       << format_number(s.linf_u) << ',' << format_number(s.linf_w) << ',' << format_number(s.running_cost) << '\n';
}

inline void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
  os << "strategy,support,window,amplitude,cost,best\n";
  for (const auto& r : rows) {
    os << detail::csv_cell(r.name) << ',' << detail::csv_cell(r.support) << ',' << detail::csv_cell(r.window) << ','
       << format_number(r.amplitude) << ',' << (r.error.empty() ? format_number(r.cost) : std::string("nan")) << ','
       << (r.best ? 1 : 0) << '\n';
  }
}

inline void write_trace_csv(std::ostream& os, const OptimizeResult& res, const std::vector<std::string>& names) {
  os << "eval";
  for (const auto& n : names) os << ',' << n;
  os << ",cost,best_so_far\n";
  for (const auto& e : res.trace) {
    os << e.eval;
    for (double p : e.params) os << ',' << format_number(p);
    os << ',' << format_number(e.cost) << ',' << format_number(e.best_so_far) << '\n';
  }
}

inline void write_calibration_csv(std::ostream& os, const std::vector<CalibrationRow>& rows) {
  os << "mu,cost,mismatch\n";
  for (const auto& r : rows)
    os << format_number(r.mu) << ',' << format_number(r.cost) << ',' << format_number(r.mismatch) << '\n';
}

/// Everything a manifest records beyond the configuration itself.
struct ManifestInfo {
  std::string command;
  double wall_seconds = 0.0;
  StepStats stats;
  MonitorReport monitors;
  std::vector<std::pair<std::string, std::string>> extra;
};

/// The configuration echo followed by a [manifest] section, which the config
/// parser skips; the result parses back to `config`.
inline std::string format_manifest(const ExperimentConfig& config, const ManifestInfo& info) {
  std::ostringstream os;
  os << serialize(config);
  os << "\n[manifest]\n";
  os << "version = " << version() << '\n';
  os << "command = " << info.command << '\n';
  os << "wall_seconds = " << format_number(info.wall_seconds) << '\n';
  os << "steps = " << info.stats.steps << '\n';
  os << "rejections = " << info.stats.rejections << '\n';
  if (info.stats.steps > 0) {
    os << "dt_min = " << format_number(info.stats.dt_min) << '\n';
    os << "dt_max = " << format_number(info.stats.dt_max) << '\n';
    os << "dt_mean = " << format_number(info.stats.dt_mean()) << '\n';
  }
  os << "snapshot_capture = nearest_step\n";
  for (const auto& v : info.monitors.verdicts)
    os << "monitor." << v.name << " = " << (v.pass ? "pass" : "fail") << " margin " << format_number(v.worst_margin)
       << " at " << format_number(v.worst_t) << '\n';
  for (const auto& [k, v] : info.extra) os << k << " = " << v << '\n';
  return os.str();
}

/// Writes `text` to `path`, creating parent directories.
inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw IoError("write failed for " + path.string());
}

template <typename Writer>
void write_csv_file(const std::filesystem::path& path, Writer&& writer) {
  std::ostringstream os;
  writer(os);
  write_text_file(path, os.str());
}

} // namespace pestctl
