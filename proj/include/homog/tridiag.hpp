#pragma once

#include <cmath>
#include <vector>

#include "homog/errors.hpp"

namespace homog {

/// Eigen-decomposition of a symmetric tridiagonal matrix by the implicit
/// QL algorithm with Wilkinson shifts. diag has n entries, off has n-1
/// (off[i] couples i and i+1). On return eigenvalues are in `values`
/// (unsorted) and column k of `vectors` (vectors[i][k]) is the
/// corresponding eigenvector.
struct TridiagEigen {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};

inline TridiagEigen tridiag_eigen(std::vector<double> diag,
                                  std::vector<double> off,
                                  bool want_vectors = true) {
  const int n = static_cast<int>(diag.size());
  require(static_cast<int>(off.size()) == std::max(0, n - 1),
          ErrorCode::dimension_mismatch, "off-diagonal size mismatch");
  TridiagEigen out;
  if (n == 0) return out;
  off.push_back(0.0);

  std::vector<std::vector<double>> z;
  if (want_vectors) {
    z.assign(static_cast<std::size_t>(n),
             std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) z[i][i] = 1.0;
  }

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(off[m]) <= 1e-300 + 2.3e-16 * dd) break;
      }
      if (m != l) {
        require(iter++ < 64, ErrorCode::lanczos_nonconvergence,
                "tridiagonal QL did not converge");
        double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
        double r = std::hypot(g, 1.0);
        g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * off[i];
          double b = c * off[i];
          r = std::hypot(f, g);
          off[i + 1] = r;
          if (r == 0.0) {  // rotation annihilated early; restart this sweep
            diag[i + 1] -= p;
            off[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = diag[i + 1] - p;
          r = (diag[i] - g) * s + 2.0 * c * b;
          p = s * r;
          diag[i + 1] = g + p;
          g = c * r - b;
          if (want_vectors) {
            for (int k = 0; k < n; ++k) {
              double fk = z[k][i + 1];
              z[k][i + 1] = s * z[k][i] + c * fk;
              z[k][i] = c * z[k][i] - s * fk;
            }
          }
        }
        if (underflow) continue;
        diag[l] -= p;
        off[l] = g;
        off[m] = 0.0;
      }
    } while (m != l);
  }

  out.values = std::move(diag);
  if (want_vectors) out.vectors = std::move(z);
  return out;
}

}  // namespace homog
