#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <future>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "homog/cholesky.hpp"
#include "homog/coefficient.hpp"
#include "homog/discretize.hpp"
#include "homog/eigenpair.hpp"
#include "homog/errors.hpp"
#include "homog/linspec.hpp"

namespace homog {

struct PminOptions {
  double delta_cone = 1e-8;  // minimum constraint integral before projection
  double tol = 1e-8;         // relative eigenvalue stagnation threshold
  int stagnation_window = 5; // consecutive quiet iterations required
  int max_iter = 100000;
  int restarts = 10;
  std::uint64_t seed = 0x5851f42d4c957f2dull;
  std::string trace_csv;     // per-iteration (iteration,energy,step) when set
};

/// Rayleigh quotient for general p: phi_energy / weighted_p_mass.
inline double rayleigh_general(const CoefficientField& c,
                               const std::vector<double>& field,
                               const DiscreteFunction& v) {
  double den = weighted_p_mass(field, v, c.p());
  require(den != 0.0, ErrorCode::on_null_cone,
          "weighted p-mass vanishes; quotient undefined");
  return phi_energy(c, v) / den;
}

namespace detail {

struct DescentResult {
  bool converged = false;
  double lambda = 0.0;
  std::vector<double> u;
  int iterations = 0;
  double last_change = 0.0;
};

/// Monotone projected descent for E(u) = int Phi(x, grad u) on the manifold
/// int rho_eps |u|^p = 1. The search direction is the manifold gradient
/// grad E - lambda grad G (G the constraint integral, lambda = E the current
/// quotient), preconditioned by the p=2 stiffness of the same A(x); after
/// each trial step the iterate is rescaled back to the manifold, which is
/// valid by the (p-1)-homogeneity of the flux while the constraint integral
/// stays positive. Backtracking halves the step whenever the energy would
/// rise or the constraint drops below delta_cone; Barzilai-Borwein scaling
/// proposes the next step length.
inline DescentResult descend(const CoefficientField& c,
                             const std::vector<double>& field, const Grid& g,
                             const BandCholesky& M, std::vector<double> u0,
                             const PminOptions& opt, std::ostream* trace) {
  DescentResult out;
  const double p = c.p();
  DiscreteFunction u(g, std::move(u0));

  double mass = lumped_p_mass(field, u, p);
  if (mass <= opt.delta_cone) return out;
  for (auto& x : u.values()) x /= std::pow(mass, 1.0 / p);

  double energy = phi_energy(c, u);

  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };

  // On the manifold the driving direction is the preconditioned gradient of
  // the Rayleigh quotient: M^{-1}(grad E - lambda grad G) with G the
  // constraint integral and lambda = E the current quotient.
  auto direction = [&](const DiscreteFunction& at, double lambda) {
    std::vector<double> r = phi_energy_gradient(c, at);
    std::vector<double> gm = lumped_p_mass_gradient(field, at, p);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= lambda * gm[i];
    std::vector<double> d = r;
    M.solve(d);
    return std::pair{std::move(d), std::move(r)};
  };

  auto [dir, resid] = direction(u, energy);
  double gd = dot(resid, dir);
  if (gd <= 1e-300) {  // already stationary
    out.converged = true;
    out.lambda = energy;
    out.u = u.values();
    return out;
  }
  double step = 1.0 / std::sqrt(gd);

  std::vector<double> u_prev = u.values(), g_prev = dir;
  int quiet = 0;
  double lambda_prev = energy;

  for (int it = 1; it <= opt.max_iter; ++it) {
    DiscreteFunction trial(g);
    bool accepted = false;
    double s = step;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < trial.values().size(); ++i)
        trial.values()[i] = u.values()[i] - s * dir[i];
      double m = lumped_p_mass(field, trial, p);
      if (m > opt.delta_cone) {
        double scale = std::pow(m, 1.0 / p);
        for (auto& x : trial.values()) x /= scale;
        double e = phi_energy(c, trial);
        if (e <= energy * (1.0 + 1e-15)) {
          u = std::move(trial);
          energy = e;
          accepted = true;
          step = s;
          break;
        }
        trial = DiscreteFunction(g);
      }
      s *= 0.5;
    }
    if (!accepted) {  // no descent direction at this resolution: stationary
      out.converged = true;
      break;
    }
    if (trace)
      *trace << it << "," << energy << "," << step << "\n";

    double change = std::abs(energy - lambda_prev) /
                    std::max(std::abs(energy), 1e-300);
    lambda_prev = energy;
    out.last_change = change;
    out.iterations = it;
    if (change <= opt.tol) {
      if (++quiet >= opt.stagnation_window) {
        out.converged = true;
        break;
      }
    } else {
      quiet = 0;
    }

    std::tie(dir, resid) = direction(u, energy);

    // BB1 step in the preconditioned geometry, clamped and safeguarded.
    double du_du = 0.0, du_dg = 0.0;
    for (std::size_t i = 0; i < dir.size(); ++i) {
      double du = u.values()[i] - u_prev[i];
      double dg = dir[i] - g_prev[i];
      du_du += du * du;
      du_dg += du * dg;
    }
    u_prev = u.values();
    g_prev = dir;
    if (du_dg > 0.0 && du_du > 0.0)
      step = std::clamp(du_du / du_dg, step * 0.1, step * 10.0);
    else
      step *= 2.0;
  }

  out.lambda = energy;
  out.u = u.values();
  return out;
}

inline std::vector<double> laplacian_mode(const Grid& g) {
  auto f = [&](Point x) {
    double v = std::sin(std::numbers::pi * (x[0] - g.extent(0).lo) /
                        g.extent(0).length());
    if (g.dimension() == 2)
      v *= std::sin(std::numbers::pi * (x[1] - g.extent(1).lo) /
                    g.extent(1).length());
    return v;
  };
  return DiscreteFunction::interpolate(g, f).values();
}

}  // namespace detail

/// First eigenvalue of the requested sign class by direct minimization of
/// the Rayleigh quotient over the discrete constraint manifold. Runs a
/// deterministic set of restarts (p=2 pencil eigenvector when available,
/// the first Laplacian mode, then seeded random iterates) and returns the
/// smallest converged quotient.
inline EigenPair first_eigenvalue_pmin(const CoefficientField& c,
                                       const std::vector<double>& field,
                                       const Grid& g, Sign sign,
                                       const PminOptions& opt = {},
                                       const std::vector<double>* init = nullptr) {
  if (sign == Sign::negative) {
    std::vector<double> flipped = field;
    for (auto& x : flipped) x = -x;
    EigenPair e = first_eigenvalue_pmin(c, flipped, g, Sign::positive, opt, init);
    e.lambda = -e.lambda;
    e.sign = Sign::negative;
    return e;
  }

  bool attains_positive = false;
  for (double v : field) attains_positive |= v > 0.0;
  require(attains_positive, ErrorCode::no_positive_spectrum,
          "projected weight attains no positive value");

  auto M2 = assemble_stiffness(c.with_p(2.0), g);
  BandCholesky M = BandCholesky::factor(M2);

  // Candidate starting iterates.
  std::vector<std::vector<double>> starts;
  if (init) starts.push_back(*init);
  try {
    PencilProblem pencil{M2, assemble_weighted_mass(field, g)};
    auto slice = pencil_spectrum(pencil, 1, Sign::positive);
    starts.push_back(slice.eigenvectors.at(0));
  } catch (const Error&) {
    // fall through to generic starts
  }
  starts.push_back(detail::laplacian_mode(g));
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  for (int r = 0; r < std::max(0, opt.restarts); ++r) {
    std::vector<double> v(static_cast<std::size_t>(g.interior_count()));
    for (auto& x : v) x = gauss(rng);
    starts.push_back(std::move(v));
  }

  std::ofstream trace;
  if (!opt.trace_csv.empty()) {
    trace.open(opt.trace_csv);
    require(trace.good(), ErrorCode::io_failure,
            "cannot open trace file " + opt.trace_csv);
    trace << "iteration,energy,step\n";
  }

  std::vector<std::vector<double>> feasible;
  for (auto& s : starts) {
    DiscreteFunction probe(g, s);
    if (lumped_p_mass(field, probe, c.p()) > opt.delta_cone)
      feasible.push_back(std::move(s));
  }
  require(!feasible.empty(), ErrorCode::constraint_unreachable,
          "no starting iterate with positive constraint integral among " +
              std::to_string(starts.size()) + " candidates");

  // independent restarts run concurrently; the minimum converged quotient
  // wins and the reduction is order-independent
  std::vector<std::future<detail::DescentResult>> futures;
  for (std::size_t si = 1; si < feasible.size(); ++si)
    futures.push_back(std::async(std::launch::async, [&, si]() {
      return detail::descend(c, field, g, M, std::move(feasible[si]), opt,
                             nullptr);
    }));
  std::optional<detail::DescentResult> best;
  bool hit_max_iter = false;
  auto consider = [&](detail::DescentResult res) {
    if (!res.converged) {
      hit_max_iter = true;
      return;
    }
    if (!best || res.lambda < best->lambda) best = std::move(res);
  };
  consider(detail::descend(c, field, g, M, std::move(feasible[0]), opt,
                           trace.is_open() ? &trace : nullptr));
  for (auto& f : futures) consider(f.get());
  if (!best) {
    require(!hit_max_iter, ErrorCode::max_iterations,
            "no restart converged within max_iter = " +
                std::to_string(opt.max_iter));
    raise(ErrorCode::max_iterations, "descent failed to converge");
  }

  EigenPair e;
  e.lambda = best->lambda;
  e.k = 1;
  e.sign = Sign::positive;
  e.eigenfunction = DiscreteFunction(g, best->u);
  e.residual = best->last_change;
  e.bisection_width = 0.0;
  return e;
}

}  // namespace homog
