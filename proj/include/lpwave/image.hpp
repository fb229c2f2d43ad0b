#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <utility>

#include "lpwave/grid.hpp"
#include "lpwave/io.hpp"

namespace lpwave {

/// Display range for image export. auto_range picks the field's min/max.
struct DisplayRange {
  double lo = 0.0;
  double hi = 1.0;
};

inline DisplayRange auto_range(const ScalarField& f) {
  double lo = f.values.front(), hi = f.values.front();
  for (double v : f.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

namespace detail_img {

/// Linear map of v onto [0,1]: clamp((v - lo)/(hi - lo)). A degenerate range
/// (hi == lo) maps everything to 0.5, so constant fields render mid-gray.
inline double unit_level(double v, const DisplayRange& r) {
  if (r.hi == r.lo) return 0.5;
  return std::clamp((v - r.lo) / (r.hi - r.lo), 0.0, 1.0);
}

}  // namespace detail_img

/// 16-bit binary PGM (P5, maxval 65535, most significant byte first).
/// Levels are llround(u * 65535) of the clamped unit level u; exact halves
/// round away from zero.
inline void write_pgm16(const std::string& path, const ScalarField& f, const DisplayRange& range) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << "P5\n" << f.grid.cols << " " << f.grid.rows << "\n65535\n";
  std::string bytes;
  bytes.reserve(f.values.size() * 2);
  for (double v : f.values) {
    const auto level = static_cast<std::uint16_t>(
        std::llround(detail_img::unit_level(v, range) * 65535.0));
    bytes.push_back(static_cast<char>(level >> 8));
    bytes.push_back(static_cast<char>(level & 0xFF));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw io_error("write failed for '" + path + "'");
}

inline void write_pgm16(const std::string& path, const ScalarField& f) {
  write_pgm16(path, f, auto_range(f));
}

/// 8-bit binary PPM (P6) with a fixed diverging colormap: u in [0,1] maps to
///   red   = 255 * min(1, 2u)
///   green = 255 * (1 - |2u - 1|)
///   blue  = 255 * min(1, 2(1-u))
/// i.e. blue at the low end, white at the midpoint, red at the high end.
/// Channel values use llround.
inline void write_ppm8(const std::string& path, const ScalarField& f, const DisplayRange& range) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << "P6\n" << f.grid.cols << " " << f.grid.rows << "\n255\n";
  std::string bytes;
  bytes.reserve(f.values.size() * 3);
  for (double v : f.values) {
    const double u = detail_img::unit_level(v, range);
    const double r = std::min(1.0, 2.0 * u);
    const double g = 1.0 - std::fabs(2.0 * u - 1.0);
    const double b = std::min(1.0, 2.0 * (1.0 - u));
    bytes.push_back(static_cast<char>(std::llround(r * 255.0)));
    bytes.push_back(static_cast<char>(std::llround(g * 255.0)));
    bytes.push_back(static_cast<char>(std::llround(b * 255.0)));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw io_error("write failed for '" + path + "'");
}

inline void write_ppm8(const std::string& path, const ScalarField& f) {
  write_ppm8(path, f, auto_range(f));
}

}  // namespace lpwave
