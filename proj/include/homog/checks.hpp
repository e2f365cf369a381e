#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "homog/discretize.hpp"
#include "homog/oscillation.hpp"
#include "homog/shoot1d.hpp"
#include "homog/weights.hpp"

namespace homog {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string details;
};

namespace checks {

/// Periodicity, scaling and sup-bound invariants of the weight families.
inline CheckResult weight_invariants(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  std::uniform_real_distribution<double> upos(0.05, 2.0);
  auto trig = PeriodicWeight::trig(
      2, 0.5, {TrigTerm{1.0, {1, 0}, true}, TrigTerm{0.25, {2, 1}, false}});
  auto pw = PeriodicWeight::piecewise(2, 3, {1, -2, 3, 0.5, -0.5, 2, -1, 1, 4});
  int bad = 0;
  for (int it = 0; it < 100; ++it) {
    Point x{unif(rng), unif(rng)};
    for (int axis = 0; axis < 2; ++axis) {
      Point xs = x;
      xs[axis] += 1.0;
      if (std::abs(trig.eval(x) - trig.eval(xs)) > 1e-12) ++bad;
      if (std::abs(pw.eval(x) - pw.eval(xs)) > 1e-12) ++bad;
    }
    double eps = upos(rng);
    Point y{unif(rng), unif(rng)};
    if (std::abs(trig.eval_scaled(eps, {eps * y[0], eps * y[1]}) -
                 trig.eval(y)) > 1e-12)
      ++bad;
  }
  for (int it = 0; it < 10000; ++it) {
    Point x{unif(rng), unif(rng)};
    if (std::abs(trig.eval(x)) > trig.linf_bound() + 1e-15) ++bad;
    if (std::abs(pw.eval(x)) > pw.linf_bound()) ++bad;
  }
  for (int it = 0; it < 20; ++it) {
    double c = unif(rng);
    if (std::abs(weight_stats(trig.shifted(c)).mean -
                 (weight_stats(trig).mean + c)) > 1e-12)
      ++bad;
  }
  return {"weight-invariants", bad == 0,
          bad == 0 ? "periodicity, scaling, shift and sup bound hold"
                   : std::to_string(bad) + " violations"};
}

/// The oscillatory-integral inequality on randomized (g, v, eps, p)
/// triples per dimension, with the certified Poincare bound on the right.
inline CheckResult oscillation_inequality(std::uint64_t seed, int trialsonedim,
                                          int dim) {
  std::mt19937_64 rng(seed + dim);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  using std::numbers::pi;
  int failures = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < trialsonedim; ++trial) {
    int freq = 1 + static_cast<int>(unif(rng) * 3);
    bool use_sin = unif(rng) < 0.5;
    double amp = 0.2 + unif(rng);
    PeriodicWeight gw =
        dim == 1
            ? PeriodicWeight::trig(1, 0.0, {TrigTerm{amp, {freq, 0}, use_sin}})
            : PeriodicWeight::trig(
                  2, 0.0, {TrigTerm{amp, {freq, use_sin ? 1 : 0}, use_sin}});
    double eps = 1.0 / (2 << static_cast<int>(unif(rng) * 4));
    double p = 1.0 + 2.0 * unif(rng);
    double a1 = unif(rng), a2 = unif(rng);
    Grid g = dim == 1 ? unit_interval_grid(129) : unit_square_grid(21);
    auto v = DiscreteFunction::interpolate(g, [&](Point x) {
      double s = std::sin(pi * x[0]) + a1 * std::sin(2 * pi * x[0]);
      if (dim == 2) s *= std::sin(pi * x[1]) + a2 * x[1] * (1 - x[1]);
      return s;
    });
    auto rep = oscillation_check(gw, eps, v, p);
    if (!rep.ok) ++failures;
    worst_ratio = std::max(worst_ratio, rep.ratio);
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "N=%d: %d/%d ok, worst ratio %.3g", dim,
                trialsonedim - failures, trialsonedim, worst_ratio);
  return {"oscillation-inequality-" + std::to_string(dim) + "d", failures == 0,
          buf};
}

/// Shooting solver homogeneity and sign symmetry on a sign-changing weight.
inline CheckResult shoot_symmetries(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> upos(0.5, 3.0);
  auto w = PeriodicWeight::trig(1, 0.5, {TrigTerm{1.0, {1, 0}, true}});
  Problem1D prob;
  prob.p = 2.0;
  prob.weight = w;
  prob.eps = 0.25;
  double lam = eigenvalue_1d(prob, 1, Sign::positive).lambda;
  int bad = 0;
  for (int it = 0; it < 3; ++it) {
    double t = upos(rng);
    Problem1D scaled = prob;
    scaled.weight = PeriodicWeight::trig(1, 0.5 * t, {TrigTerm{t, {1, 0}, true}});
    double lam_t = eigenvalue_1d(scaled, 1, Sign::positive).lambda;
    if (std::abs(lam_t - lam / t) > 1e-8 * std::abs(lam / t)) ++bad;
  }
  Problem1D neg = prob;
  neg.weight = w.negated();
  double plus_of_neg = eigenvalue_1d(neg, 1, Sign::positive).lambda;
  double minus = eigenvalue_1d(prob, 1, Sign::negative).lambda;
  if (std::abs(plus_of_neg + minus) > 1e-8 * std::abs(minus)) ++bad;
  return {"shoot-symmetries", bad == 0,
          bad == 0 ? "homogeneity and sign symmetry to 1e-8"
                   : std::to_string(bad) + " violations"};
}

/// The assembled p=2 stiffness reproduces phi_energy on random vectors.
inline CheckResult quadratic_consistency(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  auto c = CoefficientField::periodic(
      2, 2.0, PeriodicWeight::trig(2, 2.0, {TrigTerm{0.5, {1, 1}, true}}),
      PeriodicWeight::constant(2, 0.25), PeriodicWeight::constant(2, 3.0), 1.0,
      4.0);
  Grid g = unit_square_grid(17);
  auto K = assemble_stiffness(c, g);
  int bad = 0;
  for (int it = 0; it < 25; ++it) {
    DiscreteFunction v(g);
    for (auto& x : v.values()) x = gauss(rng);
    double q = K.quadratic_form(v.values());
    if (std::abs(phi_energy(c, v) - q) > 1e-10 * std::abs(q)) ++bad;
  }
  return {"stiffness-energy-consistency", bad == 0,
          bad == 0 ? "quadratic form matches the energy to 1e-10"
                   : std::to_string(bad) + " violations"};
}

}  // namespace checks

/// The randomized property suites behind the `check` run kind. Seeded and
/// deterministic.
inline std::vector<CheckResult> run_property_checks(std::uint64_t seed,
                                                    int oscillation_trials = 500) {
  std::vector<CheckResult> out;
  out.push_back(checks::weight_invariants(seed));
  out.push_back(checks::oscillation_inequality(seed, oscillation_trials, 1));
  out.push_back(checks::oscillation_inequality(seed, oscillation_trials, 2));
  out.push_back(checks::shoot_symmetries(seed));
  out.push_back(checks::quadratic_consistency(seed));
  return out;
}

}  // namespace homog
