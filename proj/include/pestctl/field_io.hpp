#pragma once

/// @file field_io.hpp
/// Snapshot files and number formatting.
///
/// Binary snapshot layout: one ASCII header line
///   PESTCTL-FIELD v1 nx ny x_min x_max y_min y_max\n
/// followed by nx*ny little-endian IEEE-754 doubles in row-major (x fastest) order.

#include "pestctl/error.hpp"
#include "pestctl/fields.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

namespace pestctl {

/// Shortest-round-trip is not what we want here: every number gets 17 significant
/// digits so that emitted files are byte-stable and independent of the C locale.
inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return v;
}

namespace detail {

inline std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
  return r;
}

} // namespace detail

inline void write_field(std::ostream& os, const ScalarField& f) {
  const Grid& g = f.grid();
  os << "PESTCTL-FIELD v1 " << g.nx << ' ' << g.ny << ' ' << format_number(g.x_min) << ' '
     << format_number(g.x_max) << ' ' << format_number(g.y_min) << ' ' << format_number(g.y_max) << '\n';
  for (double v : f.values()) {
    const std::uint64_t bits = detail::to_little_endian(std::bit_cast<std::uint64_t>(v));
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    os.write(bytes, 8);
  }
  if (!os) throw IoError("failed writing field data");
}

inline ScalarField read_field(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw IoError("missing field header");
  std::istringstream hs(header);
  std::string magic, version, sx0, sx1, sy0, sy1;
  std::size_t nx = 0, ny = 0;
  hs >> magic >> version >> nx >> ny >> sx0 >> sx1 >> sy0 >> sy1;
  if (!hs || magic != "PESTCTL-FIELD" || version != "v1") throw IoError("bad field header: " + header);
  Grid g(nx, ny, parse_number(sx0), parse_number(sx1), parse_number(sy0), parse_number(sy1));
  std::vector<double> values(g.size());
  for (auto& v : values) {
    char bytes[8];
    if (!is.read(bytes, 8)) throw IoError("truncated field data");
    std::uint64_t bits = 0;
    std::memcpy(&bits, bytes, 8);
    v = std::bit_cast<double>(detail::to_little_endian(bits));
  }
  return ScalarField(g, std::move(values));
}

inline void write_field(const std::filesystem::path& path, const ScalarField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_field(os, f);
}

inline ScalarField read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_field(is);
}

/// Plotting export: one `x,y,value` line per cell.
inline void write_field_csv(std::ostream& os, const ScalarField& f) {
  const Grid& g = f.grid();
  os << "x,y,value\n";
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i)
      os << format_number(g.x_center(i)) << ',' << format_number(g.y_center(j)) << ',' << format_number(f(i, j))
         << '\n';
}

} // namespace pestctl
