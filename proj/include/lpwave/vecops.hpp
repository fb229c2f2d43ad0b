#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lpwave {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double norm2(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

/// y += alpha * x
inline void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

/// d = s + beta * d
inline void xpby(const std::vector<double>& s, double beta, std::vector<double>& d) {
  if (s.size() != d.size()) throw std::invalid_argument("xpby: size mismatch");
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = s[k] + beta * d[k];
}

}  // namespace lpwave
