#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "homog/coefficient.hpp"
#include "homog/discretize.hpp"
#include "homog/eigenpair.hpp"
#include "homog/errors.hpp"
#include "homog/grid.hpp"
#include "homog/weights.hpp"

namespace homog {

/// State of the first-order system for the 1-D problem
///   -(c(x)|u'|^{p-2}u')' = lambda rho(x) |u|^{p-2} u,   u(a)=0,
/// with flux w = c(x)|u'|^{p-2}u':
///   u' = |w/c|^{1/(p-1)} sign(w),   w' = -lambda rho(x) |u|^{p-2} u.
struct ShootState {
  double x = 0.0;
  double u = 0.0;
  double w = 1.0;
  int zero_count = 0;
};

struct ShootOptions {
  double tol_ode = 1e-10;
  double tol_eig = 1e-9;
  double lambda0 = 1.0;
  double lambda_max = 1e12;
  double blowup_guard = 1e12;
  bool allow_rescale = true;  // (p-1)-homogeneous renormalization of (u,w)
  int samples = 1027;         // eigenfunction sample nodes (incl. endpoints)
};

namespace detail {

struct ShotResult {
  ShootState end;
  // optional samples: (x, u*exp(log_scale)) pairs, scale-managed
  std::vector<double> sample_u;
  std::vector<double> sample_logscale;
  double end_logscale = 0.0;
  double max_abs_u = 0.0;        // max |u| seen, in end-of-run scaling
};

/// Cubic Hermite evaluation on [0,1] for (u0,m0)-(u1,m1), slopes already
/// scaled by the step length.
inline double hermite(double t, double u0, double m0, double u1, double m1) {
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * u0 + (t3 - 2 * t2 + t) * m0 +
         (-2 * t3 + 3 * t2) * u1 + (t3 - t2) * m1;
}

inline double hermite_root(double u0, double m0, double u1, double m1) {
  double lo = 0.0, hi = 1.0, flo = u0;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    double f = hermite(mid, u0, m0, u1, m1);
    if ((f < 0) == (flo < 0)) {
      lo = mid;
      flo = f;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Adaptive Dormand-Prince 5(4) over one smooth segment [a,b]. Counts the
/// zero crossings of u (roots located on the cubic Hermite interpolant;
/// a root within 1e-10 of the global right endpoint is the boundary zero
/// of an eigenfunction and is not an interior crossing), optionally
/// records samples at the given ascending x positions (those falling in
/// (a,b]), and renormalizes the (p-1)-homogeneous state when it grows
/// large.
template <typename CF, typename RF>
void integrate_segment(double p, CF&& c, RF&& rho, double lambda, double a,
                       double b, double count_below, double hmax_cap,
                       const ShootOptions& opt, ShotResult& res,
                       const std::vector<double>* sample_x,
                       std::size_t& sample_at) {
  const double pm1 = p - 1.0;
  const bool p_is_2 = (p == 2.0);
  auto rhs = [&](double x, double u, double w, double& du, double& dw) {
    double cx = c(x);
    if (p_is_2) {
      du = w / cx;
      dw = -lambda * rho(x) * u;
    } else {
      du = (w == 0.0) ? 0.0
                      : std::copysign(std::pow(std::abs(w) / cx, 1.0 / pm1), w);
      // |u|^{p-2} u = |u|^{p-1} sign(u)
      dw = (u == 0.0) ? 0.0
                      : -lambda * rho(x) *
                            std::copysign(std::pow(std::abs(u), pm1), u);
    }
  };

  double x = a, u = res.end.u, w = res.end.w;
  double span = b - a;
  if (span <= 0.0) return;
  double h = std::min(span, hmax_cap) * 0.1;
  const double hmin = span * 1e-14 + 1e-300;

  double k1u, k1w;
  rhs(x, u, w, k1u, k1w);

  while (x < b) {
    if (x + h > b) h = b - x;
    // Dormand-Prince stages
    double k2u, k2w, k3u, k3w, k4u, k4w, k5u, k5w, k6u, k6w, k7u, k7w;
    {
      double xu = u + h * (0.2 * k1u);
      double xw = w + h * (0.2 * k1w);
      rhs(x + 0.2 * h, xu, xw, k2u, k2w);
    }
    {
      double xu = u + h * (3.0 / 40 * k1u + 9.0 / 40 * k2u);
      double xw = w + h * (3.0 / 40 * k1w + 9.0 / 40 * k2w);
      rhs(x + 0.3 * h, xu, xw, k3u, k3w);
    }
    {
      double xu = u + h * (44.0 / 45 * k1u - 56.0 / 15 * k2u + 32.0 / 9 * k3u);
      double xw = w + h * (44.0 / 45 * k1w - 56.0 / 15 * k2w + 32.0 / 9 * k3w);
      rhs(x + 0.8 * h, xu, xw, k4u, k4w);
    }
    {
      double xu = u + h * (19372.0 / 6561 * k1u - 25360.0 / 2187 * k2u +
                           64448.0 / 6561 * k3u - 212.0 / 729 * k4u);
      double xw = w + h * (19372.0 / 6561 * k1w - 25360.0 / 2187 * k2w +
                           64448.0 / 6561 * k3w - 212.0 / 729 * k4w);
      rhs(x + 8.0 / 9 * h, xu, xw, k5u, k5w);
    }
    {
      double xu = u + h * (9017.0 / 3168 * k1u - 355.0 / 33 * k2u +
                           46732.0 / 5247 * k3u + 49.0 / 176 * k4u -
                           5103.0 / 18656 * k5u);
      double xw = w + h * (9017.0 / 3168 * k1w - 355.0 / 33 * k2w +
                           46732.0 / 5247 * k3w + 49.0 / 176 * k4w -
                           5103.0 / 18656 * k5w);
      rhs(x + h, xu, xw, k6u, k6w);
    }
    double u1 = u + h * (35.0 / 384 * k1u + 500.0 / 1113 * k3u +
                         125.0 / 192 * k4u - 2187.0 / 6784 * k5u +
                         11.0 / 84 * k6u);
    double w1 = w + h * (35.0 / 384 * k1w + 500.0 / 1113 * k3w +
                         125.0 / 192 * k4w - 2187.0 / 6784 * k5w +
                         11.0 / 84 * k6w);
    rhs(x + h, u1, w1, k7u, k7w);

    double eu = h * ((35.0 / 384 - 5179.0 / 57600) * k1u +
                     (500.0 / 1113 - 7571.0 / 16695) * k3u +
                     (125.0 / 192 - 393.0 / 640) * k4u +
                     (-2187.0 / 6784 + 92097.0 / 339200) * k5u +
                     (11.0 / 84 - 187.0 / 2100) * k6u - 1.0 / 40 * k7u);
    double ew = h * ((35.0 / 384 - 5179.0 / 57600) * k1w +
                     (500.0 / 1113 - 7571.0 / 16695) * k3w +
                     (125.0 / 192 - 393.0 / 640) * k4w +
                     (-2187.0 / 6784 + 92097.0 / 339200) * k5w +
                     (11.0 / 84 - 187.0 / 2100) * k6w - 1.0 / 40 * k7w);

    double su = 1e-14 + opt.tol_ode * std::max(std::abs(u), std::abs(u1));
    double sw = 1e-14 + opt.tol_ode * std::max(std::abs(w), std::abs(w1));
    double err = std::sqrt(0.5 * ((eu / su) * (eu / su) + (ew / sw) * (ew / sw)));

    if (!std::isfinite(err)) {
      h *= 0.25;
      require(h >= hmin, ErrorCode::step_size_underflow,
              "step underflow near x = " + std::to_string(x));
      continue;
    }
    if (err > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      require(h >= hmin, ErrorCode::step_size_underflow,
              "step underflow near x = " + std::to_string(x));
      continue;
    }

    // accepted
    double x1 = x + h;
    // samples inside (x, x1]
    if (sample_x) {
      while (sample_at < sample_x->size() && (*sample_x)[sample_at] <= x1) {
        double xs = (*sample_x)[sample_at];
        if (xs > x) {
          double t = (xs - x) / h;
          res.sample_u.push_back(hermite(t, u, h * k1u, u1, h * k7u));
          res.sample_logscale.push_back(res.end_logscale);
        }
        ++sample_at;
      }
    }
    // zero crossing of u
    if (u != 0.0 && u1 != 0.0 && (u < 0) != (u1 < 0)) {
      double t = hermite_root(u, h * k1u, u1, h * k7u);
      if (x + t * h < count_below) ++res.end.zero_count;
    } else if (u1 == 0.0 && x1 < count_below) {
      ++res.end.zero_count;
    }

    u = u1;
    w = w1;
    x = x1;
    k1u = k7u;
    k1w = k7w;
    res.max_abs_u = std::max(res.max_abs_u, std::abs(u));

    if (opt.allow_rescale) {
      double mag = std::max(std::abs(u), std::pow(std::abs(w), 1.0 / pm1));
      if (mag > 1e8) {
        double f = mag / 1.0;  // bring back to O(1)
        u /= f;
        w /= std::pow(f, pm1);
        res.end_logscale += std::log(f);
        res.max_abs_u /= f;
        rhs(x, u, w, k1u, k1w);
      }
      require(std::isfinite(u) && std::isfinite(w), ErrorCode::blow_up,
              "state not finite near x = " + std::to_string(x));
    } else {
      require(std::abs(u) + std::abs(w) <= opt.blowup_guard, ErrorCode::blow_up,
              "|u|+|w| exceeded the blow-up guard near x = " +
                  std::to_string(x));
    }

    if (x < b) {
      h = std::min({h * std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2)),
                    hmax_cap, b - x});
      h = std::max(h, hmin);
    }
  }
  res.end.x = x;
  res.end.u = u;
  res.end.w = w;
}

/// Full shot across [a,b] with breakpoints (weight discontinuities).
template <typename CF, typename RF>
ShotResult shoot(double p, CF&& c, RF&& rho, double lambda, double a, double b,
                 const std::vector<double>& breakpoints, double hmax_cap,
                 const ShootOptions& opt,
                 const std::vector<double>* sample_x = nullptr) {
  ShotResult res;
  res.end = ShootState{a, 0.0, 1.0, 0};
  std::size_t sample_at = 0;
  const double count_below = b - 1e-10 * (b - a);
  double prev = a;
  for (double brk : breakpoints) {
    if (brk <= prev || brk >= b) continue;
    integrate_segment(p, c, rho, lambda, prev, brk, count_below, hmax_cap, opt,
                      res, sample_x, sample_at);
    prev = brk;
  }
  integrate_segment(p, c, rho, lambda, prev, b, count_below, hmax_cap, opt,
                    res, sample_x, sample_at);
  return res;
}

}  // namespace detail

/// One shot of the first-order system from (u,w)=(0,1) at the left
/// endpoint; returns the state at the right endpoint with the number of
/// interior zero crossings of u.
inline ShootState integrate_shot(double p,
                                 const std::function<double(double)>& c,
                                 const std::function<double(double)>& rho,
                                 double lambda, Interval span,
                                 const ShootOptions& opt = {},
                                 const std::vector<double>& breakpoints = {}) {
  require(p > 1.0, ErrorCode::config_invalid, "p must exceed 1");
  auto res = detail::shoot(p, c, rho, lambda, span.lo, span.hi, breakpoints,
                           (span.hi - span.lo) / 8.0, opt);
  return res.end;
}

/// 1-D eigenproblem description: flux coefficient c(x) (equal to
/// A11(x)^{p/2} for the model operator) and weight rho(x/eps) on a domain.
struct Problem1D {
  double p = 2.0;
  PeriodicWeight coefficient = PeriodicWeight::constant(1, 1.0);  // A11(x)
  PeriodicWeight weight = PeriodicWeight::constant(1, 1.0);
  double eps = 1.0;
  Interval domain{0.0, 1.0};
};

namespace detail {

inline bool weight_attains_positive(const PeriodicWeight& w, double eps,
                                    Interval dom) {
  if (w.kind() == PeriodicWeight::Kind::piecewise) {
    auto pts = weight_breakpoints(w, eps, dom.lo, dom.hi);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      if (w.eval_scaled(eps, {0.5 * (pts[i] + pts[i + 1]), 0.0}) > 0.0)
        return true;
    return false;
  }
  int f = std::max(1, w.oscillation_frequency());
  double len = dom.length();
  int n = static_cast<int>(std::clamp(64.0 * len * f / eps, 4096.0, 1048576.0));
  for (int i = 0; i <= n; ++i)
    if (w.eval_scaled(eps, {dom.lo + len * i / n, 0.0}) > 0.0) return true;
  return false;
}

}  // namespace detail

/// k-th eigenvalue of the requested sign class by shooting with
/// oscillation counting: the count N(lambda) of zeros of u(.;lambda) in the
/// open interval is non-decreasing in lambda and jumps from k-1 to k at the
/// k-th eigenvalue, so bisection on the integer count converges to it.
/// `lambda_scan_from` lets spectrum_1d resume the geometric bracket scan
/// above an already-computed eigenvalue.
inline EigenPair eigenvalue_1d(const Problem1D& prob, int k, Sign sign,
                               const ShootOptions& opt = {},
                               double lambda_scan_from = 0.0) {
  require(k >= 1, ErrorCode::config_invalid, "k must be at least 1");
  require(prob.eps > 0.0, ErrorCode::nonpositive_eps, "eps must be positive");
  require(prob.weight.dimension() == 1 && prob.coefficient.dimension() == 1,
          ErrorCode::dimension_mismatch,
          "the shooting solver takes one-dimensional fields");
  if (sign == Sign::negative) {
    Problem1D flipped = prob;
    flipped.weight = prob.weight.negated();
    EigenPair e = eigenvalue_1d(flipped, k, Sign::positive, opt,
                                lambda_scan_from);
    e.lambda = -e.lambda;
    e.sign = Sign::negative;
    return e;
  }

  require(detail::weight_attains_positive(prob.weight, prob.eps, prob.domain),
          ErrorCode::no_positive_spectrum,
          "weight has no positive part on the domain");

  const double a = prob.domain.lo, b = prob.domain.hi;
  auto cf = [&](double x) {
    return std::pow(prob.coefficient.eval({x, 0.0}), prob.p / 2.0);
  };
  auto rf = [&](double x) { return prob.weight.eval_scaled(prob.eps, {x, 0.0}); };
  auto breakpoints =
      detail::weight_breakpoints(prob.weight, prob.eps, a, b);
  // cap the step so an eps-period is never skipped; constant weights have
  // nothing to resolve
  int freq = std::max(1, prob.weight.oscillation_frequency());
  double hmax_cap =
      prob.weight.kind() == PeriodicWeight::Kind::constant
          ? (b - a) / 8.0
          : std::min((b - a) / 8.0, prob.eps / (4.0 * freq));

  auto count = [&](double lambda) {
    return detail::shoot(prob.p, cf, rf, lambda, a, b, breakpoints, hmax_cap,
                         opt)
        .end.zero_count;
  };

  double lo = 0.0;
  double hi = std::max(opt.lambda0, lambda_scan_from);
  int n_hi = count(hi);
  while (n_hi < k) {
    lo = hi;
    hi *= 2.0;
    require(hi <= opt.lambda_max, ErrorCode::bracket_not_found,
            "oscillation count below " + std::to_string(k) +
                " up to lambda_max (divergence regime)");
    n_hi = count(hi);
  }
  while (hi - lo > opt.tol_eig * hi) {
    double mid = 0.5 * (lo + hi);
    if (count(mid) >= k)
      hi = mid;
    else
      lo = mid;
  }

  // Eigenfunction from the lo side (k-1 interior sign changes).
  int nodes = std::max(opt.samples, 3);
  Grid out = build_grid(1, {prob.domain}, {nodes});
  std::vector<double> xs(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) xs[static_cast<std::size_t>(i)] = out.node_coord(0, i);
  auto shot = detail::shoot(prob.p, cf, rf, lo, a, b, breakpoints, hmax_cap,
                            opt, &xs);

  // Renormalize samples to sup-norm 1 across scale changes.
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < shot.sample_u.size(); ++i) {
    if (shot.sample_u[i] == 0.0) continue;
    max_log = std::max(max_log,
                       std::log(std::abs(shot.sample_u[i])) + shot.sample_logscale[i]);
  }
  std::vector<double> interior(static_cast<std::size_t>(nodes - 2), 0.0);
  for (std::size_t i = 0; i < shot.sample_u.size(); ++i) {
    // samples correspond to xs entries > a; the last one (x=b) is dropped
    // by the zero Dirichlet trace of the output function.
    std::size_t node = i + 1;
    if (node + 1 >= static_cast<std::size_t>(nodes)) break;
    double v = shot.sample_u[i];
    if (v != 0.0 && std::isfinite(max_log))
      v = std::copysign(
          std::exp(std::log(std::abs(v)) + shot.sample_logscale[i] - max_log),
          v);
    interior[node - 1] = v;
  }

  EigenPair e;
  e.lambda = 0.5 * (lo + hi);
  e.k = k;
  e.sign = Sign::positive;
  e.eigenfunction = DiscreteFunction(out, std::move(interior));
  double scale = shot.max_abs_u > 0 ? shot.max_abs_u : 1.0;
  e.residual = std::abs(shot.end.u) / scale;
  e.bisection_width = hi - lo;
  return e;
}

/// Eigenvalues k = 1..k_max of one sign class; strict monotonicity in k is
/// verified post hoc.
inline std::vector<EigenPair> spectrum_1d(const Problem1D& prob, int k_max,
                                          Sign sign,
                                          const ShootOptions& opt = {}) {
  std::vector<EigenPair> out;
  double prev = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    out.push_back(eigenvalue_1d(prob, k, sign, opt, prev));
    prev = std::abs(out.back().lambda) * (1.0 + 8.0 * opt.tol_eig);
    if (out.size() >= 2) {
      double cur = std::abs(out.back().lambda);
      double before = std::abs(out[out.size() - 2].lambda);
      require(cur > before, ErrorCode::precondition_failed,
              "eigenvalues not strictly monotone across k");
    }
  }
  return out;
}

/// Convenience: exact first Dirichlet eigenvalue of the 1-D p-Laplacian
/// with unit weight on (0,L): lambda_k = (p-1) (k pi_p / L)^p, where
/// pi_p = 2 pi / (p sin(pi/p)).
inline double p_laplacian_1d_eigenvalue(double p, int k, double length = 1.0) {
  double pip = 2.0 * std::numbers::pi / (p * std::sin(std::numbers::pi / p));
  return (p - 1.0) * std::pow(k * pip / length, p);
}

}  // namespace homog
