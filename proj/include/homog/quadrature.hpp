#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "homog/errors.hpp"

namespace homog {

/// 8-point Gauss-Legendre rule on [-1,1].
inline constexpr std::array<double, 8> k_gl8_x = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};

inline constexpr std::array<double, 8> k_gl8_w = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

/// Composite Gauss-Legendre integral of f over [a,b] with `panels`
/// equal subintervals.
template <typename F>
double gl8_integrate(F&& f, double a, double b, int panels) {
  double len = (b - a) / panels;
  double total = 0.0;
  for (int pnl = 0; pnl < panels; ++pnl) {
    double lo = a + pnl * len;
    double mid = lo + 0.5 * len;
    double half = 0.5 * len;
    double s = 0.0;
    for (int q = 0; q < 8; ++q) s += k_gl8_w[q] * f(mid + half * k_gl8_x[q]);
    total += s * half;
  }
  return total;
}

/// Panels needed so the panel length is at most `scale` (at least one).
inline int panels_for(double length, double scale, int64_t budget = 1 << 22) {
  if (scale <= 0.0 || length <= scale) return 1;
  int64_t n = static_cast<int64_t>(std::ceil(length / scale));
  require(n <= budget, ErrorCode::projection_unresolvable,
          "oscillation period too small for the quadrature budget");
  return static_cast<int>(n);
}

}  // namespace homog
