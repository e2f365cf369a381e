#pragma once

#include <cmath>
#include <vector>

#include "homog/errors.hpp"
#include "homog/sparse.hpp"

namespace homog {

/// Banded Cholesky factorization A = L L^T for symmetric positive definite
/// matrices from structured-grid assembly (tridiagonal in 1-D, bandwidth
/// nx+1 in 2-D). Row i of L is stored in band_[i*(w+1) .. i*(w+1)+w] for
/// columns i-w .. i.
class BandCholesky {
 public:
  static BandCholesky factor(const SparseSymmetric& a) {
    BandCholesky f;
    f.n_ = a.dim();
    f.w_ = a.bandwidth();
    const int stride = f.w_ + 1;
    f.band_.assign(static_cast<std::size_t>(f.n_) * stride, 0.0);
    for (int i = 0; i < f.n_; ++i)
      for (int j = std::max(0, i - f.w_); j <= i; ++j)
        f.at(i, j) = a.entry(i, j);

    for (int i = 0; i < f.n_; ++i) {
      const int j0 = std::max(0, i - f.w_);
      for (int j = j0; j < i; ++j) {
        double s = f.at(i, j);
        const int k0 = std::max(j0, j - f.w_);
        for (int k = k0; k < j; ++k) s -= f.at(i, k) * f.at(j, k);
        f.at(i, j) = s / f.at(j, j);
      }
      double d = f.at(i, i);
      for (int k = j0; k < i; ++k) d -= f.at(i, k) * f.at(i, k);
      require(d > 0.0 && std::isfinite(d), ErrorCode::not_spd,
              "nonpositive pivot at row " + std::to_string(i));
      f.at(i, i) = std::sqrt(d);
    }
    return f;
  }

  int dim() const { return n_; }

  /// Solve L y = b in place.
  void solve_lower(std::vector<double>& b) const {
    for (int i = 0; i < n_; ++i) {
      double s = b[static_cast<std::size_t>(i)];
      const int j0 = std::max(0, i - w_);
      for (int j = j0; j < i; ++j) s -= at(i, j) * b[static_cast<std::size_t>(j)];
      b[static_cast<std::size_t>(i)] = s / at(i, i);
    }
  }

  /// Solve L^T x = b in place.
  void solve_upper(std::vector<double>& b) const {
    for (int i = n_ - 1; i >= 0; --i) {
      double s = b[static_cast<std::size_t>(i)];
      const int jmax = std::min(n_ - 1, i + w_);
      for (int j = i + 1; j <= jmax; ++j)
        s -= at(j, i) * b[static_cast<std::size_t>(j)];
      b[static_cast<std::size_t>(i)] = s / at(i, i);
    }
  }

  /// Solve A x = b in place.
  void solve(std::vector<double>& b) const {
    solve_lower(b);
    solve_upper(b);
  }

 private:
  double& at(int i, int j) {
    return band_[static_cast<std::size_t>(i) * (w_ + 1) + (j - i + w_)];
  }
  double at(int i, int j) const {
    return band_[static_cast<std::size_t>(i) * (w_ + 1) + (j - i + w_)];
  }

  int n_ = 0;
  int w_ = 0;
  std::vector<double> band_;
};

}  // namespace homog
