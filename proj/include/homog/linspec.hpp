#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "homog/cholesky.hpp"
#include "homog/eigenpair.hpp"
#include "homog/errors.hpp"
#include "homog/sparse.hpp"
#include "homog/tridiag.hpp"

namespace homog {

/// Generalized pencil A u = lambda B u with A symmetric positive definite
/// (stiffness) and B symmetric, typically indefinite diagonal (lumped
/// weighted mass).
struct PencilProblem {
  SparseSymmetric A;
  SparseSymmetric B;
};

struct SpectrumSlice {
  Sign sign = Sign::positive;
  std::vector<double> eigenvalues;               // ascending magnitude
  std::vector<std::vector<double>> eigenvectors; // A-orthonormal
  std::vector<double> ritz_residuals;            // ||Bv - (1/lambda)Av|| / ||Av||
  int requested = 0;
  bool truncated = false;  // fewer eigenvalues of this sign exist than asked
};

struct LanczosOptions {
  double tol_ritz = 1e-8;
  int max_iter_factor = 5;  // cap on total Lanczos steps, times n
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

/// Cholesky handle for the SPD stiffness side of the pencil.
inline BandCholesky factor_spd(const SparseSymmetric& a) {
  return BandCholesky::factor(a);
}

inline double rayleigh_quotient(const PencilProblem& prob,
                                const std::vector<double>& v) {
  double den = prob.B.quadratic_form(v);
  require(den != 0.0, ErrorCode::on_null_cone,
          "v^T B v vanishes; Rayleigh quotient undefined");
  return prob.A.quadratic_form(v) / den;
}

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace detail

/// The m smallest-magnitude eigenvalues of the requested sign, computed as
/// lambda = 1/mu from the extremal eigenvalues mu of the congruent
/// symmetric operator C = L^{-1} B L^{-T} (A = L L^T) via Lanczos with full
/// reorthogonalization. Since C is congruent to B, the number of positive
/// (negative) pencil eigenvalues equals the positive (negative) inertia of
/// B, which prefilters impossible requests. mu = 0 directions correspond to
/// lambda = infinity and are never reported.
inline SpectrumSlice pencil_spectrum(const PencilProblem& prob, int m,
                                     Sign sign,
                                     const LanczosOptions& opt = {}) {
  require(m >= 1, ErrorCode::config_invalid, "m must be at least 1");
  const int n = prob.A.dim();
  require(prob.B.dim() == n, ErrorCode::dimension_mismatch,
          "pencil matrices must share dimension");

  // Inertia of diagonal B bounds the available count per sign.
  int avail = 0;
  {
    auto diag = prob.B.diagonal_values();
    bool diag_only = prob.B.is_diagonal();
    for (double d : diag) {
      if (sign == Sign::positive && d > 0.0) ++avail;
      if (sign == Sign::negative && d < 0.0) ++avail;
    }
    if (!diag_only) avail = n;  // only a bound for non-lumped B
    require(avail >= 1,
            sign == Sign::positive ? ErrorCode::no_positive_spectrum
                                   : ErrorCode::no_negative_spectrum,
            "weighted mass has no entries of the requested sign");
  }
  const int want = std::min(m, avail);

  BandCholesky L = factor_spd(prob.A);
  auto apply_c = [&](const std::vector<double>& x, std::vector<double>& y) {
    y = x;
    L.solve_upper(y);        // t = L^{-T} x
    y = prob.B.multiply(y);  // B t
    L.solve_lower(y);        // L^{-1} B t
  };

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<std::vector<double>> V;
  std::vector<double> alpha, beta;  // T diagonal / off-diagonal
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = gauss(rng);
  {
    double nv = detail::norm(v);
    for (auto& x : v) x /= nv;
  }
  V.push_back(v);

  const int max_steps = std::min<long long>(
      n, static_cast<long long>(opt.max_iter_factor) * n);
  std::vector<double> theta;           // converged Ritz values (of C)
  std::vector<std::vector<double>> ys; // Ritz vectors in Krylov space
  TridiagEigen te;

  // Residual of a Ritz pair after j steps is |beta_j * s_j|, with beta_j the
  // norm of the current residual vector (not yet appended to `beta`).
  std::vector<double> attained;  // residuals of the wanted candidates
  auto wanted_converged = [&](int steps, double bj) -> bool {
    if (steps < want) return false;
    te = tridiag_eigen(alpha, beta);
    attained.clear();
    // order candidate Ritz values: extremal of the requested sign
    std::vector<int> idx(te.values.size());
    std::iota(idx.begin(), idx.end(), 0);
    if (sign == Sign::positive)
      std::sort(idx.begin(), idx.end(),
                [&](int a, int b) { return te.values[a] > te.values[b]; });
    else
      std::sort(idx.begin(), idx.end(),
                [&](int a, int b) { return te.values[a] < te.values[b]; });
    int have = 0;
    theta.clear();
    ys.clear();
    for (int id : idx) {
      double th = te.values[id];
      if (sign == Sign::positive ? th <= 0.0 : th >= 0.0) break;
      double resid = std::abs(bj * te.vectors[static_cast<std::size_t>(steps - 1)]
                                             [static_cast<std::size_t>(id)]);
      attained.push_back(resid / std::max(std::abs(th), 1e-30));
      if (resid > opt.tol_ritz * std::max(std::abs(th), 1e-30)) break;
      theta.push_back(th);
      std::vector<double> y;
      y.reserve(static_cast<std::size_t>(steps));
      for (int r = 0; r < steps; ++r)
        y.push_back(te.vectors[static_cast<std::size_t>(r)]
                              [static_cast<std::size_t>(id)]);
      ys.push_back(std::move(y));
      if (++have == want) return true;
    }
    return false;
  };

  std::vector<double> w(static_cast<std::size_t>(n));
  bool converged = false;
  double last_beta = 0.0;
  int steps = 0;
  while (steps < max_steps) {
    apply_c(V.back(), w);
    double a_j = detail::dot(w, V.back());
    alpha.push_back(a_j);
    // full reorthogonalization (two passes)
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& vi : V) {
        double c = detail::dot(w, vi);
        for (std::size_t r = 0; r < w.size(); ++r) w[r] -= c * vi[r];
      }
    }
    double b_j = detail::norm(w);
    last_beta = b_j;
    ++steps;

    if (steps >= want && (steps % 8 == 0 || b_j < 1e-14 || steps == max_steps)) {
      if (wanted_converged(steps, b_j)) {
        converged = true;
        break;
      }
    }

    if (steps == max_steps) break;
    if (b_j < 1e-14) {
      // invariant subspace found; continue with a fresh orthogonal direction
      for (auto& x : w) x = gauss(rng);
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& vi : V) {
          double c = detail::dot(w, vi);
          for (std::size_t r = 0; r < w.size(); ++r) w[r] -= c * vi[r];
        }
      }
      double nw = detail::norm(w);
      if (nw < 1e-14) break;  // exhausted the space
      b_j = 0.0;
      for (auto& x : w) x /= nw;
      beta.push_back(0.0);
      V.push_back(w);
      continue;
    }
    beta.push_back(b_j);
    for (auto& x : w) x /= b_j;
    V.push_back(w);
  }

  if (!converged) {
    if (!wanted_converged(static_cast<int>(alpha.size()), last_beta)) {
      std::string diag = "Lanczos did not reach tol_ritz within the step cap (" +
                         std::to_string(alpha.size()) +
                         " steps); attained relative residuals:";
      for (double r : attained) diag += " " + std::to_string(r);
      raise(ErrorCode::lanczos_nonconvergence, diag);
    }
  }

  SpectrumSlice slice;
  slice.sign = sign;
  slice.requested = m;
  slice.truncated = want < m;

  // theta sorted extremal-first => lambda = 1/theta ascending in magnitude.
  for (std::size_t i = 0; i < theta.size(); ++i) {
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    for (std::size_t r = 0; r < ys[i].size(); ++r)
      for (std::size_t c = 0; c < y.size(); ++c)
        y[c] += ys[i][r] * V[r][c];
    // Map back: v = L^{-T} y is automatically A-orthonormal.
    L.solve_upper(y);
    double lambda = 1.0 / theta[i];
    std::vector<double> av = prob.A.multiply(y);
    std::vector<double> bv = prob.B.multiply(y);
    double num = 0.0, den = 0.0;
    for (std::size_t c = 0; c < y.size(); ++c) {
      double d = bv[c] - av[c] / lambda;
      num += d * d;
      den += av[c] * av[c];
    }
    slice.eigenvalues.push_back(lambda);
    slice.eigenvectors.push_back(std::move(y));
    slice.ritz_residuals.push_back(std::sqrt(num / den));
  }
  return slice;
}

}  // namespace homog
