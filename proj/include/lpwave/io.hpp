#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lpwave/grid.hpp"

namespace lpwave {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// LPW1 field files
//
// Layout (all little-endian):
//   bytes 0..3   magic "LPW1"
//   byte  4      kind: 1 = scalar field, 2 = gradient field
//   bytes 5..8   rows (u32)
//   bytes 9..12  cols (u32)
//   bytes 13..20 hx (f64)
//   bytes 21..28 hy (f64)
//   payload      row-major f64 samples: one array for a scalar field, the x
//                component followed by the y component for a gradient field
// ---------------------------------------------------------------------------

namespace detail_io {

inline constexpr char kMagic[4] = {'L', 'P', 'W', '1'};
inline constexpr std::uint8_t kKindScalar = 1;
inline constexpr std::uint8_t kKindGradient = 2;

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}
inline void put_f64(std::string& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

struct Reader {
  std::ifstream in;
  std::string path;
  explicit Reader(const std::string& p) : in(p, std::ios::binary), path(p) {
    if (!in) throw io_error("cannot open '" + p + "' for reading");
  }
  void bytes(void* dst, std::size_t n, const char* what) {
    in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
      throw io_error("truncated field file '" + path + "' (" + what + ")");
  }
  std::uint8_t u8(const char* what) {
    std::uint8_t v;
    bytes(&v, 1, what);
    return v;
  }
  std::uint32_t u32(const char* what) {
    unsigned char b[4];
    bytes(b, 4, what);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }
  double f64(const char* what) {
    unsigned char b[8];
    bytes(b, 8, what);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return std::bit_cast<double>(v);
  }
  void payload(std::vector<double>& out, std::size_t count, const char* what) {
    out.resize(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = f64(what);
  }
  void expect_eof() {
    char c;
    in.read(&c, 1);
    if (!in.eof()) throw io_error("trailing bytes in field file '" + path + "'");
  }
};

inline Grid read_header(Reader& r, std::uint8_t expected_kind, const char* kind_name) {
  char magic[4];
  r.bytes(magic, 4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw io_error("bad magic in '" + r.path + "': not an LPW1 field file");
  const std::uint8_t kind = r.u8("kind");
  if (kind != expected_kind)
    throw io_error("'" + r.path + "' is not a " + kind_name + " file (kind " +
                   std::to_string(kind) + ")");
  const std::uint32_t rows = r.u32("rows");
  const std::uint32_t cols = r.u32("cols");
  const double hx = r.f64("hx");
  const double hy = r.f64("hy");
  if (rows < 2 || cols < 2 || rows > (1u << 20) || cols > (1u << 20))
    throw io_error("invalid grid size in '" + r.path + "'");
  if (!(hx > 0.0) || !(hy > 0.0) || !std::isfinite(hx) || !std::isfinite(hy))
    throw io_error("invalid grid spacing in '" + r.path + "'");
  return Grid(static_cast<int>(rows), static_cast<int>(cols), hx, hy);
}

inline std::string header_bytes(std::uint8_t kind, const Grid& g) {
  std::string out;
  out.append(kMagic, 4);
  out.push_back(static_cast<char>(kind));
  put_u32(out, static_cast<std::uint32_t>(g.rows));
  put_u32(out, static_cast<std::uint32_t>(g.cols));
  put_f64(out, g.hx);
  put_f64(out, g.hy);
  return out;
}

inline void check_finite(const std::vector<double>& v, const std::string& path) {
  for (double x : v)
    if (!std::isfinite(x)) throw io_error("non-finite sample in field data for '" + path + "'");
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw io_error("write failed for '" + path + "'");
}

}  // namespace detail_io

inline void write_field(const std::string& path, const ScalarField& f) {
  detail_io::check_finite(f.values, path);
  std::string bytes = detail_io::header_bytes(detail_io::kKindScalar, f.grid);
  bytes.reserve(bytes.size() + 8 * f.values.size());
  for (double v : f.values) detail_io::put_f64(bytes, v);
  detail_io::write_file(path, bytes);
}

inline void write_field(const std::string& path, const GradientField& g) {
  detail_io::check_finite(g.x.values, path);
  detail_io::check_finite(g.y.values, path);
  std::string bytes = detail_io::header_bytes(detail_io::kKindGradient, g.grid);
  bytes.reserve(bytes.size() + 16 * g.x.values.size());
  for (double v : g.x.values) detail_io::put_f64(bytes, v);
  for (double v : g.y.values) detail_io::put_f64(bytes, v);
  detail_io::write_file(path, bytes);
}

inline ScalarField read_scalar(const std::string& path) {
  detail_io::Reader r(path);
  const Grid g = detail_io::read_header(r, detail_io::kKindScalar, "scalar-field");
  std::vector<double> v;
  r.payload(v, g.cells(), "payload");
  r.expect_eof();
  detail_io::check_finite(v, path);
  return ScalarField(g, std::move(v));
}

inline GradientField read_gradient(const std::string& path) {
  detail_io::Reader r(path);
  const Grid g = detail_io::read_header(r, detail_io::kKindGradient, "gradient-field");
  std::vector<double> vx, vy;
  r.payload(vx, g.cells(), "x payload");
  r.payload(vy, g.cells(), "y payload");
  r.expect_eof();
  detail_io::check_finite(vx, path);
  detail_io::check_finite(vy, path);
  return GradientField(ScalarField(g, std::move(vx)), ScalarField(g, std::move(vy)));
}

/// Kind byte of an LPW1 file (1 scalar, 2 gradient).
inline int peek_kind(const std::string& path) {
  detail_io::Reader r(path);
  char magic[4];
  r.bytes(magic, 4, "magic");
  if (std::memcmp(magic, detail_io::kMagic, 4) != 0)
    throw io_error("bad magic in '" + path + "': not an LPW1 field file");
  return r.u8("kind");
}

// ---------------------------------------------------------------------------
// CSV interchange: plain numeric grids, one row per line, comma-separated,
// no header. Spacing metadata is not representable; unit spacing is assumed.
// ---------------------------------------------------------------------------

/// Doubles are printed with 17 significant digits so that text round-trips
/// reproduce the binary value.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_scalar_csv(const std::string& path, const ScalarField& f) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  for (int i = 0; i < f.grid.rows; ++i) {
    for (int j = 0; j < f.grid.cols; ++j) {
      if (j) out << ',';
      out << format_double(f.at(i, j));
    }
    out << '\n';
  }
  if (!out) throw io_error("write failed for '" + path + "'");
}

inline ScalarField read_scalar_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t next = line.find(',', pos);
      if (next == std::string::npos) next = line.size();
      try {
        row.push_back(std::stod(line.substr(pos, next - pos)));
      } catch (const std::exception&) {
        throw io_error("bad numeric value in CSV '" + path + "'");
      }
      pos = next + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw io_error("ragged rows in CSV '" + path + "'");
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2 || rows.front().size() < 2)
    throw io_error("CSV '" + path + "' must contain at least a 2x2 grid");
  Grid g(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  ScalarField f(g);
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) f.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  detail_io::check_finite(f.values, path);
  return f;
}

/// Loads a scalar field from either format, chosen by the .csv extension.
inline ScalarField load_scalar(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0)
    return read_scalar_csv(path);
  return read_scalar(path);
}

// ---------------------------------------------------------------------------
// Run manifests: ordered "key = value" lines, one per setting, written next
// to every output so a run can be reproduced exactly. Deterministic for a
// fixed invocation (timings are reported on stdout, not here).
// ---------------------------------------------------------------------------

using Manifest = std::vector<std::pair<std::string, std::string>>;

inline void write_manifest(const std::string& path, const Manifest& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  for (const auto& [key, value] : m) out << key << " = " << value << '\n';
  if (!out) throw io_error("write failed for '" + path + "'");
}

inline Manifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  Manifest m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t sep = line.find(" = ");
    if (sep == std::string::npos) throw io_error("malformed manifest line in '" + path + "'");
    m.emplace_back(line.substr(0, sep), line.substr(sep + 3));
  }
  return m;
}

inline const std::string* manifest_get(const Manifest& m, const std::string& key) {
  for (const auto& [k, v] : m)
    if (k == key) return &v;
  return nullptr;
}

}  // namespace lpwave
