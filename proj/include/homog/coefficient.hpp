#pragma once

#include <array>
#include <cmath>

#include "homog/errors.hpp"
#include "homog/weights.hpp"

namespace homog {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

inline double dot2(const Vec2& a, const Vec2& b, int dim) {
  double s = a[0] * b[0];
  if (dim == 2) s += a[1] * b[1];
  return s;
}

/// Operator data for the model quasilinear family
///   a(x,xi) = (A(x) xi . xi)^{(p-2)/2} A(x) xi,
/// with potential Phi(x,xi) = (A(x) xi . xi)^{p/2}, so grad_xi Phi = p a.
/// A(x) is a symmetric matrix field with Y-periodic entries drawn from the
/// weight families; alpha and beta are uniform ellipticity bounds for A.
class CoefficientField {
 public:
  static CoefficientField isotropic(int dim, double p, double a = 1.0) {
    require(a > 0.0, ErrorCode::config_invalid, "isotropic coefficient must be positive");
    CoefficientField c;
    c.dim_ = dim;
    c.p_ = check_p(p);
    c.a11_ = PeriodicWeight::constant(dim, a);
    c.a22_ = PeriodicWeight::constant(dim, a);
    c.a12_ = PeriodicWeight::constant(dim, 0.0);
    c.alpha_ = a;
    c.beta_ = a;
    return c;
  }

  static CoefficientField periodic(int dim, double p, PeriodicWeight a11,
                                   PeriodicWeight a12, PeriodicWeight a22,
                                   double alpha, double beta) {
    require(alpha > 0.0 && beta >= alpha, ErrorCode::config_invalid,
            "need 0 < alpha <= beta");
    CoefficientField c;
    c.dim_ = dim;
    c.p_ = check_p(p);
    c.a11_ = std::move(a11);
    c.a12_ = std::move(a12);
    c.a22_ = std::move(a22);
    c.alpha_ = alpha;
    c.beta_ = beta;
    return c;
  }

  int dimension() const { return dim_; }
  double p() const { return p_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  /// Ellipticity bounds transferred to the potential:
  /// alpha^{p/2} |xi|^p <= Phi(x, xi) <= beta^{p/2} |xi|^p.
  double potential_lower_bound() const { return std::pow(alpha_, p_ / 2.0); }
  double potential_upper_bound() const { return std::pow(beta_, p_ / 2.0); }

  Mat2 matrix_at(Point x) const {
    Mat2 m{};
    m[0][0] = a11_.eval(x);
    if (dim_ == 2) {
      m[0][1] = m[1][0] = a12_.eval(x);
      m[1][1] = a22_.eval(x);
    }
    return m;
  }

  /// a(x, xi).
  Vec2 flux(Point x, const Vec2& xi) const {
    Mat2 A = matrix_at(x);
    Vec2 q{A[0][0] * xi[0] + A[0][1] * xi[1],
           A[1][0] * xi[0] + A[1][1] * xi[1]};
    double s = dot2(q, xi, dim_);
    if (s <= 0.0) return Vec2{0.0, 0.0};
    double f = std::pow(s, (p_ - 2.0) / 2.0);
    return Vec2{f * q[0], f * q[1]};
  }

  /// Phi(x, xi) = (A xi . xi)^{p/2}; Phi(x, 0) = 0.
  double potential(Point x, const Vec2& xi) const {
    Mat2 A = matrix_at(x);
    double s = A[0][0] * xi[0] * xi[0];
    if (dim_ == 2)
      s += 2.0 * A[0][1] * xi[0] * xi[1] + A[1][1] * xi[1] * xi[1];
    if (s <= 0.0) return 0.0;
    return std::pow(s, p_ / 2.0);
  }

  /// 1-D flux coefficient c(x) with w = c(x)|u'|^{p-2}u', i.e. A11^{p/2}.
  double flux_coefficient_1d(double x) const {
    return std::pow(a11_.eval({x, 0.0}), p_ / 2.0);
  }

  /// Same operator with a different exponent (used to build the p=2
  /// companion problem for preconditioning and initialization).
  CoefficientField with_p(double p) const {
    CoefficientField c = *this;
    c.p_ = check_p(p);
    return c;
  }

  const PeriodicWeight& a11() const { return a11_; }
  const PeriodicWeight& a12() const { return a12_; }
  const PeriodicWeight& a22() const { return a22_; }

  /// Eigenvalue range of A(x) at one point (closed form for 2x2 symmetric).
  std::pair<double, double> eigen_range_at(Point x) const {
    if (dim_ == 1) {
      double a = a11_.eval(x);
      return {a, a};
    }
    Mat2 A = matrix_at(x);
    double mean = 0.5 * (A[0][0] + A[1][1]);
    double rad = std::hypot(0.5 * (A[0][0] - A[1][1]), A[0][1]);
    return {mean - rad, mean + rad};
  }

  bool operator==(const CoefficientField& o) const {
    return dim_ == o.dim_ && p_ == o.p_ && alpha_ == o.alpha_ &&
           beta_ == o.beta_ && a11_ == o.a11_ && a12_ == o.a12_ &&
           a22_ == o.a22_;
  }

 private:
  static double check_p(double p) {
    require(p > 1.0, ErrorCode::config_invalid, "exponent p must exceed 1");
    return p;
  }

  int dim_ = 1;
  double p_ = 2.0;
  PeriodicWeight a11_ = PeriodicWeight::constant(1, 1.0);
  PeriodicWeight a12_ = PeriodicWeight::constant(1, 0.0);
  PeriodicWeight a22_ = PeriodicWeight::constant(1, 1.0);
  double alpha_ = 1.0;
  double beta_ = 1.0;
};

/// Sampled validation of the ellipticity contract
/// alpha |xi|^2 <= A(x) xi . xi <= beta |xi|^2 on a unit-cell lattice plus
/// random points. A violation is a configuration error, not a solver one.
inline void validate_ellipticity(const CoefficientField& c,
                                 int lattice_per_axis = 64,
                                 int random_samples = 2048,
                                 std::uint64_t seed = 0x2545f4914f6cdd1dull) {
  const double tol = 1e-12;
  auto check = [&](Point x) {
    auto [lo, hi] = c.eigen_range_at(x);
    require(lo >= c.alpha() - tol && hi <= c.beta() + tol,
            ErrorCode::config_invalid,
            "coefficient field violates its ellipticity bounds at "
            "x = (" + std::to_string(x[0]) + ", " + std::to_string(x[1]) +
                "): eig range [" + std::to_string(lo) + ", " +
                std::to_string(hi) + "] vs [alpha, beta] = [" +
                std::to_string(c.alpha()) + ", " + std::to_string(c.beta()) +
                "]");
  };
  for (int i = 0; i < lattice_per_axis; ++i) {
    double x = (i + 0.5) / lattice_per_axis;
    if (c.dimension() == 1) {
      check({x, 0.0});
    } else {
      for (int j = 0; j < lattice_per_axis; ++j)
        check({x, (j + 0.5) / lattice_per_axis});
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int s = 0; s < random_samples; ++s)
    check({unif(rng), c.dimension() == 2 ? unif(rng) : 0.0});
}

}  // namespace homog
