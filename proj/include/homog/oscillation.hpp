#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "homog/discretize.hpp"
#include "homog/errors.hpp"
#include "homog/grid.hpp"
#include "homog/quadrature.hpp"
#include "homog/weights.hpp"

namespace homog {

/// One evaluation of the periodic oscillatory-integral inequality
///   |int_Omega g(x/eps) |v|^p dx|
///     <= ||g||_inf * p * c1 * eps * ||v||_p^{p-1} * ||grad v||_p
/// for a mean-zero Y-periodic g. A false `ok` is an experiment finding,
/// not an error.
struct OscillationReport {
  double eps = 0.0;
  double p = 2.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool ok = true;
};

/// Certified upper bound for the optimal constant in the L^1 Poincare
/// inequality on the unit cube (mean-zero functions): 1/2 in one dimension,
/// diam(Q)/2 = sqrt(2)/2 in two.
inline double poincare_constant_bound(int dim) {
  if (dim == 1) return 0.5;
  if (dim == 2) return std::sqrt(2.0) / 2.0;
  raise(ErrorCode::unsupported_dimension,
        "Poincare bound shipped for N in {1,2}");
}

namespace detail {

/// Integral over the grid box of w(x/eps) * f(x). Panels never exceed
/// `scale` per axis (and split at piecewise-weight discontinuities), so an
/// eps-period is covered by at least 16 Gauss points when scale = eps/2.
template <typename F>
double integrate_weighted_box(const PeriodicWeight& w, double eps,
                              const Grid& g, F&& f, double scale) {
  double total = 0.0;
  if (g.dimension() == 1) {
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double a = g.node_coord(0, cx), b = g.node_coord(0, cx + 1);
      total += integrate_resolving(
          [&](double x) { return w.eval_scaled(eps, {x, 0.0}) * f(Point{x, 0.0}); },
          w, eps, a, b, scale);
    }
    return total;
  }
  for (int cy = 0; cy < g.cells(1); ++cy) {
    double ay = g.node_coord(1, cy), by = g.node_coord(1, cy + 1);
    for (int cx = 0; cx < g.cells(0); ++cx) {
      double ax = g.node_coord(0, cx), bx = g.node_coord(0, cx + 1);
      total += integrate_resolving(
          [&](double y) {
            return integrate_resolving(
                [&](double x) {
                  return w.eval_scaled(eps, {x, y}) * f(Point{x, y});
                },
                w, eps, ax, bx, scale);
          },
          w, eps, ay, by, scale);
    }
  }
  return total;
}

inline double p_norm(const DiscreteFunction& v, double p) {
  const PeriodicWeight one = PeriodicWeight::constant(v.grid().dimension(), 1.0);
  double integral = integrate_weighted_box(
      one, 1.0, v.grid(),
      [&](Point x) { return std::pow(std::abs(v(x)), p); },
      std::numeric_limits<double>::infinity());
  return std::pow(integral, 1.0 / p);
}

}  // namespace detail

inline OscillationReport oscillation_check(const PeriodicWeight& g, double eps,
                                           const DiscreteFunction& v,
                                           double p) {
  require(p >= 1.0, ErrorCode::config_invalid,
          "the inequality is stated for p >= 1");
  require(eps > 0.0, ErrorCode::nonpositive_eps, "eps must be positive");
  require(std::abs(g.exact_mean()) <= k_tau_mean, ErrorCode::precondition_failed,
          "the oscillation lemma requires a mean-zero g");
  require(g.dimension() == v.grid().dimension(), ErrorCode::dimension_mismatch,
          "weight and function dimension differ");

  OscillationReport rep;
  rep.eps = eps;
  rep.p = p;
  rep.lhs = std::abs(detail::integrate_weighted_box(
      g, eps, v.grid(), [&](Point x) { return std::pow(std::abs(v(x)), p); },
      eps / 2.0));
  double c1 = poincare_constant_bound(g.dimension());
  double vnorm = detail::p_norm(v, p);
  double gnorm = grad_p_norm(v, p);
  rep.rhs = g.linf_bound() * p * c1 * eps * std::pow(vnorm, p - 1.0) * gnorm;
  rep.ok = rep.lhs <= rep.rhs * (1.0 + 1e-10);
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : (rep.lhs == 0.0 ? 0.0 : 1e300);
  return rep;
}

/// CSV serialization of oscillation reports: eps,lhs,rhs,ratio,ok.
inline void write_oscillation_csv(std::ostream& os,
                                  const std::vector<OscillationReport>& reps) {
  os << "eps,lhs,rhs,ratio,ok\n";
  char buf[160];
  for (const auto& r : reps) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d\n", r.eps,
                  r.lhs, r.rhs, r.ratio, r.ok ? 1 : 0);
    os << buf;
  }
}

/// sup over the (symmetrized) finite test set of |int (rho_eps - rho_bar) v|,
/// the finite-net stand-in for the weak-* gap over a compact set.
inline double weak_star_gap(const PeriodicWeight& w, double eps,
                            const std::vector<DiscreteFunction>& test_set) {
  require(!test_set.empty(), ErrorCode::config_invalid,
          "weak_star_gap needs a nonempty test set");
  require(eps > 0.0, ErrorCode::nonpositive_eps, "eps must be positive");
  const double mean = w.exact_mean();
  double sup = 0.0;
  for (const auto& v : test_set) {
    double signed_integral = detail::integrate_weighted_box(
        w, eps, v.grid(), [&](Point x) { return v(x); }, eps / 2.0);
    double mean_part = detail::integrate_weighted_box(
        PeriodicWeight::constant(w.dimension(), mean), 1.0, v.grid(),
        [&](Point x) { return v(x); },
        std::numeric_limits<double>::infinity());
    sup = std::max(sup, std::abs(signed_integral - mean_part));
  }
  return sup;
}

}  // namespace homog
