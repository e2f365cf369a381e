// Acceptance suite: one pass/fail line per criterion (A1..A10), nonzero
// exit when any criterion fails. Runtimes are reported per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "homog/checks.hpp"
#include "homog/discretize.hpp"
#include "homog/harness.hpp"
#include "homog/linspec.hpp"
#include "homog/oscillation.hpp"
#include "homog/pmin.hpp"
#include "homog/shoot1d.hpp"
#include "oracles.hpp"

using namespace homog;
using std::numbers::pi;

namespace {

struct Check {
  bool pass = true;
  std::string notes;

  void expect(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!ok) notes += (notes.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) {
    notes += (notes.empty() ? "" : "; ") + s;
  }
};

PeriodicWeight sin1d(double constant = 0.0, double amp = 1.0) {
  return PeriodicWeight::trig(1, constant, {TrigTerm{amp, {1, 0}, true}});
}

ProblemSpec spec_1d(double p, PeriodicWeight w) {
  ProblemSpec s;
  s.p = p;
  s.dim = 1;
  s.weight = std::move(w);
  s.coefficient = CoefficientField::isotropic(1, p);
  return s;
}

std::vector<double> dyadic_eps(int from_denom, int to_denom) {
  std::vector<double> eps;
  for (int m = from_denom; m <= to_denom; m *= 2) eps.push_back(1.0 / m);
  return eps;
}

char fmt_buf[256];
std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  std::snprintf(fmt_buf, sizeof(fmt_buf), f, a, b, c);
  return fmt_buf;
}

// --------------------------------------------------------------------------

Check a1_exact_spectra() {
  Check c;
  // shoot1d: k^2 pi^2 to 1e-6
  auto prob = spec_1d(2.0, PeriodicWeight::constant(1, 1.0));
  Problem1D p1;
  p1.p = 2.0;
  auto spec5 = spectrum_1d(p1, 5, Sign::positive);
  for (int k = 1; k <= 5; ++k) {
    double rel = std::abs(spec5[k - 1].lambda - k * k * pi * pi) /
                 (k * k * pi * pi);
    c.expect(rel <= 1e-6, fmt("shoot1d k=%g rel=%.3g", k, rel));
  }

  // linspec 1-D at h = 1/512: 1e-3
  Grid g1 = unit_interval_grid(513);
  PencilProblem pen1{
      assemble_stiffness(CoefficientField::isotropic(1, 2.0), g1),
      assemble_weighted_mass(
          project_weight(PeriodicWeight::constant(1, 1.0), 1.0, g1), g1)};
  auto slice1 = pencil_spectrum(pen1, 5, Sign::positive);
  for (int k = 1; k <= 5; ++k) {
    double rel = std::abs(slice1.eigenvalues[k - 1] - k * k * pi * pi) /
                 (k * k * pi * pi);
    c.expect(rel <= 1e-3, fmt("linspec1d k=%g rel=%.3g", k, rel));
  }

  // linspec on the unit square: (2 pi^2, 5 pi^2) to 1e-2
  Grid g2 = unit_square_grid(65);
  PencilProblem pen2{
      assemble_stiffness(CoefficientField::isotropic(2, 2.0), g2),
      assemble_weighted_mass(
          project_weight(PeriodicWeight::constant(2, 1.0), 1.0, g2), g2)};
  auto slice2 = pencil_spectrum(pen2, 2, Sign::positive);
  double r1 = std::abs(slice2.eigenvalues[0] - 2 * pi * pi) / (2 * pi * pi);
  double r2 = std::abs(slice2.eigenvalues[1] - 5 * pi * pi) / (5 * pi * pi);
  c.expect(r1 <= 1e-2, fmt("square lam1 rel=%.3g", r1));
  c.expect(r2 <= 1e-2, fmt("square lam2 rel=%.3g", r2));
  c.note(fmt("square rel errs %.2g / %.2g", r1, r2));
  return c;
}

Check a2_t13_rate() {
  Check c;
  auto eps = dyadic_eps(8, 128);
  for (double p : {2.0, 2.5}) {
    for (int k : {1, 2}) {
      auto spec = spec_1d(p, sin1d(2.0));
      auto records =
          epsilon_sweep(spec, eps, {k}, Sign::positive, SolverKind::shoot1d, 4);
      Problem1D limit;
      limit.p = p;
      limit.weight = PeriodicWeight::constant(1, 2.0);
      double lam_limit = eigenvalue_1d(limit, k, Sign::positive).lambda;
      auto v = verdict_rate_convergence(records, lam_limit);
      c.expect(v.pass, fmt("p=%g k=%g: ", p, k) + v.details);
      if (p == 2.0 && k == 1) c.note(v.details);
    }
  }
  return c;
}

Check a3_t12_mean_zero() {
  Check c;
  auto eps = dyadic_eps(8, 128);
  std::vector<std::pair<std::string, PeriodicWeight>> weights = {
      {"sin", sin1d()}, {"step", PeriodicWeight::piecewise(1, 2, {1.0, -1.0})}};
  for (double p : {2.0, 3.0}) {
    for (auto& [name, w] : weights) {
      auto spec = spec_1d(p, w);
      auto records =
          epsilon_sweep(spec, eps, {1}, Sign::positive, SolverKind::shoot1d, 4);
      auto v = verdict_divergence(records, weight_stats(w), p);
      c.expect(v.pass, "p=" + std::to_string(p) + " " + name + ": " + v.details);

      // sign-symmetric negative sequence
      auto neg_spec = spec_1d(p, w.negated());
      auto neg = epsilon_sweep(neg_spec, eps, {1}, Sign::negative,
                               SolverKind::shoot1d, 4);
      for (std::size_t i = 0; i < records.size(); ++i) {
        double rel = std::abs(std::abs(neg[i].lambda) - records[i].lambda) /
                     records[i].lambda;
        c.expect(rel <= 1e-8, fmt("sign symmetry rel=%.3g", rel));
      }
      if (p == 2.0) c.note(name + ": " + v.details);
    }
  }
  return c;
}

// The criterion's stated weight -2+sin(2 pi y) has an empty positive part
// (sup = -1 < 0), so its positive spectrum does not exist at any eps; the
// mean-negative case is exercised with -2+3sin(2 pi y), which satisfies
// rho_bar < 0 with a nontrivial positive part. The literal -2+sin weight is
// covered by the A5 no-positive-spectrum dichotomy.
Check a4_t12_mean_negative() {
  Check c;
  auto eps = dyadic_eps(8, 128);
  auto w = sin1d(-2.0, 3.0);
  auto stats = weight_stats(w);
  for (int k : {1, 2}) {
    auto spec = spec_1d(2.0, w);
    auto records =
        epsilon_sweep(spec, eps, {k}, Sign::positive, SolverKind::shoot1d, 4);
    auto v = verdict_divergence(records, stats, 2.0);
    c.expect(v.pass, fmt("k=%g: ", k) + v.details);
    if (k == 1) c.note(v.details);

    // mirror: rho_bar > 0 with the negative sequence, via sign symmetry
    auto mirror_spec = spec_1d(2.0, w.negated());
    auto mirror = epsilon_sweep(mirror_spec, eps, {k}, Sign::negative,
                                SolverKind::shoot1d, 4);
    auto vm = verdict_divergence(mirror, weight_stats(w.negated()), 2.0);
    c.expect(vm.pass, fmt("mirror k=%g: ", k) + vm.details);
    for (std::size_t i = 0; i < records.size(); ++i) {
      double rel = std::abs(std::abs(mirror[i].lambda) - records[i].lambda) /
                   records[i].lambda;
      c.expect(rel <= 1e-8, fmt("mirror symmetry rel=%.3g", rel));
    }
  }
  return c;
}

Check a5_t11_dichotomy() {
  Check c;
  auto eps = dyadic_eps(8, 128);
  // divergent side: weights with vanishing positive part
  for (auto& w : {sin1d(-2.0), sin1d(-1.0, 0.25)}) {
    auto records = epsilon_sweep(spec_1d(2.0, w), eps, {1}, Sign::positive,
                                 SolverKind::shoot1d, 4);
    auto v = verdict_no_positive_spectrum(records);
    c.expect(v.pass, "expected NoPositiveSpectrum rows: " + v.details);
  }
  // convergent side: rho = 2 + sin, gap at eps = 1/128 below 5%
  for (int k : {1, 2}) {
    auto records = epsilon_sweep(spec_1d(2.0, sin1d(2.0)), eps, {k},
                                 Sign::positive, SolverKind::shoot1d, 4);
    Problem1D limit;
    limit.p = 2.0;
    limit.weight = PeriodicWeight::constant(1, 2.0);
    double lam = eigenvalue_1d(limit, k, Sign::positive).lambda;
    auto v = verdict_limit_convergence(records, lam, 0.05);
    c.expect(v.pass, fmt("k=%g: ", k) + v.details);
    if (k == 1) c.note(v.details);
  }
  return c;
}

Check a6_oscillation() {
  Check c;
  for (int dim : {1, 2}) {
    auto r = checks::oscillation_inequality(20240601, 500, dim);
    c.expect(r.pass, r.name + ": " + r.details);
    if (dim == 1) c.note(r.details);
  }

  // worked example 1: cos(2 pi m x) orthogonal to 1 and cos(2 pi x)
  Grid g = unit_interval_grid(513);
  auto v = DiscreteFunction::interpolate(
      g, [](Point x) { return std::sin(pi * x[0]); });
  auto gw = PeriodicWeight::trig(1, 0.0, {TrigTerm{1.0, {1, 0}, false}});
  auto rep = oscillation_check(gw, 1.0 / 8, v, 2.0);
  c.expect(rep.lhs <= 1e-8 && rep.ok, fmt("cos orthogonality lhs=%.3g", rep.lhs));

  // worked example 2: identically zero weight, 0 <= 0 convention
  auto zero = PeriodicWeight::constant(1, 0.0);
  auto rep0 = oscillation_check(zero, 0.125, v, 2.0);
  c.expect(rep0.lhs == 0.0 && rep0.rhs == 0.0 && rep0.ok, "zero convention");

  // worked example 3: ramp against sin(16 pi x) at p=1, closed-form oracle
  Grid gr = unit_interval_grid(257);
  auto ramp = DiscreteFunction::interpolate(gr, [](Point x) { return x[0]; });
  auto sg = sin1d();
  double eps = 0.125;
  auto repr = oscillation_check(sg, eps, ramp, 1.0);
  double exact = 0.0;
  for (int cx = 0; cx < gr.cells(0); ++cx)
    exact += oracle::cell_linear_against_sin(
        gr.node_coord(0, cx), gr.node_coord(0, cx + 1), ramp.node_value(cx),
        ramp.node_value(cx + 1), eps);
  c.expect(std::abs(repr.lhs - std::abs(exact)) <= 1e-8,
           fmt("ramp lhs=%.6g oracle=%.6g", repr.lhs, std::abs(exact)));
  c.expect(repr.ok, "ramp inequality");
  return c;
}

Check a7_sturm() {
  Check c;
  // 1-D, p in {2,3}: domains, weights, potentials
  for (double p : {2.0, 3.0}) {
    SturmFamily fam;
    fam.p = p;
    fam.weight_low = sin1d(1.0);
    fam.weight_high = sin1d(2.0);
    fam.eps = 1.0;
    auto verdicts = sturm_checks(fam);
    for (const auto& v : verdicts)
      c.expect(v.pass, "p=" + std::to_string(p) + " " + v.claim + ": " + v.details);

    // exact reference: lambda_k(0,1) = k^2 pi^2 (p=2) and the 0.8-domain
    if (p == 2.0) {
      Problem1D prob;
      prob.p = 2.0;
      auto big = spectrum_1d(prob, 5, Sign::positive);
      prob.domain = Interval{0.0, 0.8};
      auto small = spectrum_1d(prob, 5, Sign::positive);
      for (int k = 1; k <= 5; ++k) {
        double exact_big = k * k * pi * pi;
        double exact_small = exact_big / 0.64;
        c.expect(std::abs(big[k - 1].lambda - exact_big) <= 1e-8 * exact_big,
                 fmt("domain exact big k=%g", k));
        c.expect(
            std::abs(small[k - 1].lambda - exact_small) <= 1e-8 * exact_small,
            fmt("domain exact small k=%g", k));
      }
    }
  }

  // 2-D nested boxes at p = 2 via the pencil solver (solver-vs-solver 1e-4)
  auto lam2d = [&](double side) {
    Grid g = build_grid(2, {Interval{0.0, side}, Interval{0.0, side}}, {65, 65});
    PencilProblem pen{
        assemble_stiffness(CoefficientField::isotropic(2, 2.0), g),
        assemble_weighted_mass(
            project_weight(PeriodicWeight::constant(2, 1.0), 1.0, g), g)};
    return pencil_spectrum(pen, 5, Sign::positive).eigenvalues;
  };
  auto big = lam2d(1.0);
  auto small = lam2d(0.8);
  for (int k = 0; k < 5; ++k) {
    c.expect(big[k] <= small[k] * (1 + 1e-4), fmt("2-D nesting k=%g", k + 1));
    // exact scaling of the continuum: lambda(0.8 box) = lambda(unit)/0.64
    double rel = std::abs(small[k] - big[k] / 0.64) / (big[k] / 0.64);
    c.expect(rel <= 1e-4, fmt("2-D scaling k=%g rel=%.3g", k + 1, rel));
  }
  return c;
}

Check a8_proof_devices() {
  Check c;
  auto cfi = CoefficientField::isotropic(1, 2.0);
  auto w = sin1d();
  // test-function bound dominates lambda_1^+ and scales like 1/eps
  std::vector<std::pair<double, double>> bounds;
  std::vector<SweepRecord> lambdas;
  for (double eps : dyadic_eps(8, 64)) {
    bounds.emplace_back(eps, testfunction_upper_bound(cfi, w, eps, 2.0));
    Problem1D prob;
    prob.p = 2.0;
    prob.weight = w;
    prob.eps = eps;
    SweepRecord r;
    r.eps = eps;
    r.k = 1;
    r.lambda = eigenvalue_1d(prob, 1, Sign::positive).lambda;
    r.solver = "shoot1d";
    lambdas.push_back(r);
  }
  auto vt = verdict_testfn_bound(bounds, lambdas);
  c.expect(vt.pass, vt.claim + ": " + vt.details);
  c.note(vt.details);

  // cube packing bound on explicit, oscillating, and p=3 configurations
  std::vector<std::pair<double, double>> pairs;
  auto spec_const = spec_1d(2.0, PeriodicWeight::constant(1, 1.0));
  double b1 = cube_packing_bound(spec_const, 0.25, 2, 1.0);
  c.expect(std::abs(b1 - 16 * pi * pi) <= 1e-6 * b1, "explicit 16 pi^2");
  pairs.emplace_back(b1, 4 * pi * pi);

  auto spec_osc = spec_1d(2.0, w);
  for (double eps : {1.0 / 16, 1.0 / 32}) {
    Problem1D prob;
    prob.p = 2.0;
    prob.weight = w;
    prob.eps = eps;
    pairs.emplace_back(cube_packing_bound(spec_osc, 0.25, 2, eps),
                       eigenvalue_1d(prob, 2, Sign::positive).lambda);
  }
  auto spec3 = spec_1d(3.0, w);
  Problem1D prob3;
  prob3.p = 3.0;
  prob3.weight = w;
  prob3.eps = 1.0 / 16;
  pairs.emplace_back(cube_packing_bound(spec3, 0.25, 2, 1.0 / 16),
                     eigenvalue_1d(prob3, 2, Sign::positive).lambda);
  auto vc = verdict_cube_bound(pairs);
  c.expect(vc.pass, vc.claim + ": " + vc.details);
  return c;
}

Check a9_cross_solver() {
  Check c;
  // shoot1d vs linspec at p=2 on a sign-changing weight, k <= 5
  auto w = sin1d(0.5);
  double eps = 0.25;
  Grid g = unit_interval_grid(2001);
  PencilProblem pen{
      assemble_stiffness(CoefficientField::isotropic(1, 2.0), g),
      assemble_weighted_mass(project_weight(w, eps, g), g)};
  auto slice = pencil_spectrum(pen, 5, Sign::positive);
  Problem1D prob;
  prob.p = 2.0;
  prob.weight = w;
  prob.eps = eps;
  double worst = 0.0;
  for (int k = 1; k <= 5; ++k) {
    double lam = eigenvalue_1d(prob, k, Sign::positive).lambda;
    double rel = std::abs(slice.eigenvalues[k - 1] - lam) / lam;
    worst = std::max(worst, rel);
    c.expect(rel <= 1e-4, fmt("shoot-vs-linspec k=%g rel=%.3g", k, rel));
  }
  c.note(fmt("shoot vs linspec worst rel %.3g", worst));

  // pmin vs linspec first eigenvalues (1-D indefinite, 2-D definite + indefinite)
  {
    Grid g1 = unit_interval_grid(513);
    auto field = project_weight(w, eps, g1);
    PencilProblem p1{assemble_stiffness(CoefficientField::isotropic(1, 2.0), g1),
                     assemble_weighted_mass(field, g1)};
    double lam_lin = pencil_spectrum(p1, 1, Sign::positive).eigenvalues[0];
    PminOptions popt;
    popt.restarts = 3;
    double lam_pmin = first_eigenvalue_pmin(CoefficientField::isotropic(1, 2.0),
                                            field, g1, Sign::positive, popt)
                          .lambda;
    double rel = std::abs(lam_pmin - lam_lin) / lam_lin;
    c.expect(rel <= 1e-4, fmt("pmin-vs-linspec 1-D rel=%.3g", rel));
  }
  {
    Grid g2 = unit_square_grid(65);
    auto w2 = PeriodicWeight::trig(2, 0.5, {TrigTerm{1.0, {1, 0}, true}});
    auto field = project_weight(w2, 0.25, g2);
    PencilProblem p2{assemble_stiffness(CoefficientField::isotropic(2, 2.0), g2),
                     assemble_weighted_mass(field, g2)};
    double lam_lin = pencil_spectrum(p2, 1, Sign::positive).eigenvalues[0];
    PminOptions popt;
    popt.restarts = 2;
    double lam_pmin = first_eigenvalue_pmin(CoefficientField::isotropic(2, 2.0),
                                            field, g2, Sign::positive, popt)
                          .lambda;
    double rel = std::abs(lam_pmin - lam_lin) / lam_lin;
    c.expect(rel <= 1e-4, fmt("pmin-vs-linspec 2-D rel=%.3g", rel));
    c.note(fmt("pmin vs linspec 2-D rel %.3g", rel));
  }

  // pmin vs shoot1d at p = 3
  {
    Grid g1 = unit_interval_grid(1025);
    auto field = project_weight(PeriodicWeight::constant(1, 1.0), 1.0, g1);
    PminOptions popt;
    popt.restarts = 2;
    double lam_pmin = first_eigenvalue_pmin(CoefficientField::isotropic(1, 3.0),
                                            field, g1, Sign::positive, popt)
                          .lambda;
    Problem1D p3;
    p3.p = 3.0;
    double lam_shoot = eigenvalue_1d(p3, 1, Sign::positive).lambda;
    double rel = std::abs(lam_pmin - lam_shoot) / lam_shoot;
    c.expect(rel <= 1e-3, fmt("pmin-vs-shoot p=3 rel=%.3g", rel));

    // indefinite variant
    auto field2 = project_weight(w, eps, g1);
    double pm2 = first_eigenvalue_pmin(CoefficientField::isotropic(1, 3.0),
                                       field2, g1, Sign::positive, popt)
                     .lambda;
    Problem1D pi3;
    pi3.p = 3.0;
    pi3.weight = w;
    pi3.eps = eps;
    double sh2 = eigenvalue_1d(pi3, 1, Sign::positive).lambda;
    double rel2 = std::abs(pm2 - sh2) / sh2;
    c.expect(rel2 <= 1e-3, fmt("pmin-vs-shoot p=3 indefinite rel=%.3g", rel2));
  }
  return c;
}

Check a10_weyl_tail() {
  Check c;
  // (p, N) = (2, 1) and (3, 1) by shooting
  for (double p : {2.0, 3.0}) {
    Problem1D prob;
    prob.p = p;
    auto spec = spectrum_1d(prob, 12, Sign::positive);
    std::vector<double> lam;
    for (const auto& e : spec) lam.push_back(e.lambda);
    auto fit = weyl_tail_estimate(lam);
    c.expect(std::abs(fit.slope - p) <= 0.15,
             fmt("N=1 p=%g slope=%.4f", p, fit.slope));
    c.note(fmt("p=%g slope %.3f", p, fit.slope));
  }
  // (2, 2) by the pencil solver, k = 1..12
  Grid g = unit_square_grid(65);
  PencilProblem pen{
      assemble_stiffness(CoefficientField::isotropic(2, 2.0), g),
      assemble_weighted_mass(
          project_weight(PeriodicWeight::constant(2, 1.0), 1.0, g), g)};
  auto slice = pencil_spectrum(pen, 12, Sign::positive);
  auto fit = weyl_tail_estimate(slice.eigenvalues);
  c.expect(std::abs(fit.slope - 1.0) <= 0.15, fmt("N=2 slope=%.4f", fit.slope));
  c.note(fmt("N=2 slope %.3f", fit.slope));
  return c;
}

}  // namespace

int main() {
  struct Entry {
    const char* id;
    const char* title;
    std::function<Check()> run;
    double runtime_cap;  // seconds; 0 = uncapped
  };
  std::vector<Entry> entries = {
      {"A1", "exact spectra (shoot1d, linspec 1-D/2-D)", a1_exact_spectra,
       30.0},
      {"A2", "convergence rate |lambda_eps - lambda| <= C eps", a2_t13_rate,
       300.0},
      {"A3", "mean-zero divergence: lambda_1 = O(1/eps)", a3_t12_mean_zero,
       300.0},
      {"A4", "mean-negative divergence window (and mirror)",
       a4_t12_mean_negative, 300.0},
      {"A5", "convergence/divergence dichotomy", a5_t11_dichotomy, 0.0},
      {"A6", "oscillatory-integral inequality", a6_oscillation, 60.0},
      {"A7", "Sturm comparisons (domain, weight, potential)", a7_sturm, 0.0},
      {"A8", "proof-device bounds (test function, cube packing)",
       a8_proof_devices, 0.0},
      {"A9", "cross-solver consistency", a9_cross_solver, 0.0},
      {"A10", "Weyl tail lambda_k ~ C k^{p/N}", a10_weyl_tail, 0.0},
  };

  int failures = 0;
  for (const auto& e : entries) {
    auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = e.run();
    } catch (const std::exception& ex) {
      c.pass = false;
      c.notes = std::string("exception: ") + ex.what();
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (e.runtime_cap > 0.0 && secs > e.runtime_cap) {
      c.pass = false;
      c.notes += (c.notes.empty() ? "" : "; ") +
                 fmt("runtime %.1fs over the %.0fs cap", secs, e.runtime_cap);
    }
    std::printf("[%s] %-4s %-55s (%.1fs)%s%s\n", c.pass ? "PASS" : "FAIL",
                e.id, e.title, secs, c.notes.empty() ? "" : "  -- ",
                c.notes.c_str());
    std::fflush(stdout);
    if (!c.pass) ++failures;
  }
  std::printf("%d/%zu acceptance criteria passed\n",
              static_cast<int>(entries.size()) - failures, entries.size());
  return failures == 0 ? 0 : 1;
}
