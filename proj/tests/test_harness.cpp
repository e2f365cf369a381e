#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "homog/harness.hpp"
#include "oracles.hpp"

using namespace homog;
using std::numbers::pi;

namespace {

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

std::vector<SweepRecord> synthetic(const std::vector<double>& eps,
                                   auto&& lambda_of_eps) {
  std::vector<SweepRecord> rs;
  for (double e : eps) {
    SweepRecord r;
    r.eps = e;
    r.k = 1;
    r.lambda = lambda_of_eps(e);
    r.solver = "synthetic";
    rs.push_back(r);
  }
  return rs;
}

}  // namespace

TEST_CASE("solver capability matrix") {
  CHECK(resolve_solver(SolverKind::automatic, 2.0, 1, 3) == SolverKind::shoot1d);
  CHECK(resolve_solver(SolverKind::automatic, 2.0, 2, 3) == SolverKind::linspec);
  CHECK(resolve_solver(SolverKind::automatic, 3.0, 2, 1) == SolverKind::pmin);
  CHECK_THROWS_MATCHES(resolve_solver(SolverKind::automatic, 3.0, 2, 2), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::solver_inapplicable;
                       }));
  CHECK_THROWS_AS(resolve_solver(SolverKind::pmin, 3.0, 2, 2), Error);
}

TEST_CASE("epsilon_sweep produces one record per (eps,k)") {
  auto spec = spec_1d(2.0, sin1d(2.0));
  auto eps = dyadic_eps(8, 128);
  auto records =
      epsilon_sweep(spec, eps, {1}, Sign::positive, SolverKind::shoot1d, 2);
  REQUIRE(records.size() == 5);
  double limit = pi * pi / 2.0;
  for (const auto& r : records) {
    CHECK_FALSE(r.failed);
    CHECK(r.lambda == Catch::Approx(limit).epsilon(0.2));
  }
  // eps strictly decreasing in the sorted output
  for (std::size_t i = 0; i + 1 < records.size(); ++i)
    CHECK(records[i].eps > records[i + 1].eps);

  // mean-zero weight: lambda_1^+ grows as eps shrinks
  auto div_records = epsilon_sweep(spec_1d(2.0, sin1d()), eps, {1},
                                   Sign::positive, SolverKind::shoot1d, 2);
  for (std::size_t i = 0; i + 1 < div_records.size(); ++i)
    CHECK(div_records[i + 1].lambda > div_records[i].lambda);

  CHECK_THROWS_MATCHES(
      epsilon_sweep(spec, {}, {1}, Sign::positive, SolverKind::shoot1d), Error,
      Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.code() == ErrorCode::config_invalid;
      }));
}

TEST_CASE("fit_rate on synthetic power laws") {
  auto eps = dyadic_eps(8, 256);

  auto conv = synthetic(eps, [](double e) { return 10.0 + 3.0 * e; });
  auto f1 = fit_rate(conv, Quantity::gap_to_limit, 10.0);
  CHECK(f1.slope == Catch::Approx(1.0).margin(1e-12));
  CHECK(f1.r_squared == Catch::Approx(1.0).margin(1e-12));

  auto inv = synthetic(eps, [](double e) { return 5.0 / e; });
  auto f2 = fit_rate(inv, Quantity::value);
  CHECK(f2.slope == Catch::Approx(-1.0).margin(1e-12));

  auto inv2 = synthetic(eps, [](double e) { return 7.0 / (e * e); });
  auto f3 = fit_rate(inv2, Quantity::value);
  CHECK(f3.slope == Catch::Approx(-2.0).margin(1e-12));

  // reciprocal tag: 1/lambda of the 5/eps family scales like eps
  auto f4 = fit_rate(inv, Quantity::reciprocal);
  CHECK(f4.slope == Catch::Approx(1.0).margin(1e-12));

  // nonpositive quantities are excluded and flagged, not fitted
  auto grazing = synthetic(eps, [](double e) { return 10.0 + 3.0 * e; });
  grazing[2].lambda = 10.0;  // zero gap to the reference
  auto f5 = fit_rate(grazing, Quantity::gap_to_limit, 10.0);
  CHECK(f5.excluded == 1);
  CHECK(f5.n_points == static_cast<int>(eps.size()) - 1);
  CHECK(f5.slope == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("rate convergence verdict on rho = 2 + sin") {
  auto spec = spec_1d(2.0, sin1d(2.0));
  auto records = epsilon_sweep(spec, dyadic_eps(8, 128), {1}, Sign::positive,
                               SolverKind::shoot1d, 2);
  Problem1D limit_prob;
  limit_prob.p = 2.0;
  limit_prob.weight = PeriodicWeight::constant(1, 2.0);
  double limit = eigenvalue_1d(limit_prob, 1, Sign::positive).lambda;
  CHECK(limit == Catch::Approx(pi * pi / 2).epsilon(1e-8));

  auto v = verdict_rate_convergence(records, limit);
  INFO(v.details);
  CHECK(v.pass);
  CHECK(v.claim == "T1.3-rate");
  CHECK(v.consumed.size() == records.size());

  auto vc = verdict_limit_convergence(records, limit);
  INFO(vc.details);
  CHECK(vc.pass);
}

TEST_CASE("divergence verdict cases and guards") {
  // case 1: mean-zero sine
  auto spec = spec_1d(2.0, sin1d());
  auto records = epsilon_sweep(spec, dyadic_eps(8, 128), {1}, Sign::positive,
                               SolverKind::shoot1d, 2);
  auto st = weight_stats(spec.weight);
  auto v = verdict_divergence(records, st, 2.0);
  INFO(v.details);
  CHECK(v.pass);
  CHECK(v.claim == "T1.2-case1");

  // guard: positive-mean weight fed to a positive-sign divergence verdict
  auto bad_stats = weight_stats(sin1d(2.0));
  CHECK_THROWS_MATCHES(verdict_divergence(records, bad_stats, 2.0), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::precondition_failed;
                       }));
}

TEST_CASE("no-positive-spectrum verdict over a sweep of gap rows") {
  auto spec = spec_1d(2.0, sin1d(-1.0, 0.25));  // sup rho = -0.75 < 0
  auto records = epsilon_sweep(spec, dyadic_eps(8, 64), {1}, Sign::positive,
                               SolverKind::shoot1d);
  for (const auto& r : records) {
    CHECK(r.failed);
    CHECK(r.error == "NoPositiveSpectrum");
  }
  auto v = verdict_no_positive_spectrum(records);
  CHECK(v.pass);

  auto good = epsilon_sweep(spec_1d(2.0, sin1d(2.0)), dyadic_eps(8, 64), {1},
                            Sign::positive, SolverKind::shoot1d);
  CHECK_FALSE(verdict_no_positive_spectrum(good).pass);
}

TEST_CASE("test-function upper bound dominates lambda_1^+ and scales") {
  auto c = CoefficientField::isotropic(1, 2.0);
  auto w = sin1d();
  Problem1D prob;
  prob.p = 2.0;
  prob.weight = w;

  double prev_bound = 0.0;
  for (double eps : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    double bound = testfunction_upper_bound(c, w, eps, 2.0);
    prob.eps = eps;
    double lam = eigenvalue_1d(prob, 1, Sign::positive).lambda;
    CHECK(bound >= lam);
    CHECK(bound > prev_bound);  // grows as eps shrinks
    prev_bound = bound;
  }

  CHECK_THROWS_MATCHES(testfunction_upper_bound(c, w, 1.5, 2.0), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::bracket_nonpositive;
                       }));
  CHECK_THROWS_MATCHES(testfunction_upper_bound(c, sin1d(2.0), 0.125, 2.0),
                       Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::precondition_failed;
                       }));
}

TEST_CASE("cube packing bound: explicit values and dominance") {
  auto spec = spec_1d(2.0, PeriodicWeight::constant(1, 1.0));
  double bound = cube_packing_bound(spec, 0.25, 2, 1.0);
  CHECK(bound == Catch::Approx(16 * pi * pi).epsilon(1e-8));
  CHECK(bound >= 4 * pi * pi);

  CHECK_THROWS_MATCHES(cube_packing_bound(spec, 0.5, 3, 1.0), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::packing_infeasible;
                       }));

  // oscillating weight: both sides computed by shooting
  auto osc = spec_1d(2.0, sin1d());
  double eps = 1.0 / 16;
  double b2 = cube_packing_bound(osc, 0.25, 2, eps);
  Problem1D prob;
  prob.p = 2.0;
  prob.weight = osc.weight;
  prob.eps = eps;
  double lam2 = eigenvalue_1d(prob, 2, Sign::positive).lambda;
  CHECK(b2 >= lam2);
}

TEST_CASE("sturm check family passes on the reference cases") {
  SturmFamily fam;
  fam.p = 2.0;
  fam.weight_low = sin1d(1.0);
  fam.weight_high = sin1d(2.0);
  auto verdicts = sturm_checks(fam);
  REQUIRE(verdicts.size() == 2);
  for (const auto& v : verdicts) {
    INFO(v.claim << ": " << v.details);
    CHECK(v.pass);
  }
}

TEST_CASE("weyl tail slopes for the closed-form spectra") {
  std::vector<double> lam2, lam3;
  for (int k = 1; k <= 12; ++k) {
    lam2.push_back(k * k * pi * pi);
    lam3.push_back(oracle::p_laplacian_eigenvalue(3.0, k));
  }
  CHECK(weyl_tail_estimate(lam2).slope == Catch::Approx(2.0).margin(1e-12));
  CHECK(weyl_tail_estimate(lam3).slope == Catch::Approx(3.0).margin(1e-12));
  CHECK_THROWS_AS(weyl_tail_estimate({1.0, 2.0, 3.0}), Error);
}

TEST_CASE("records CSV round trip including gap rows") {
  auto spec = spec_1d(2.0, sin1d(-1.0, 0.25));
  auto records = epsilon_sweep(spec, dyadic_eps(8, 64), {1}, Sign::positive,
                               SolverKind::shoot1d);
  records[0].failed = true;  // already failed; keep as-is
  std::stringstream ss;
  write_records_csv(ss, records);
  auto back = read_records_csv(ss);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].eps == records[i].eps);
    CHECK(back[i].k == records[i].k);
    CHECK(back[i].failed == records[i].failed);
    CHECK(back[i].error == records[i].error);
    CHECK(back[i].solver == records[i].solver);
  }
}

TEST_CASE("sweep determinism modulo wall time") {
  auto spec = spec_1d(2.0, sin1d(2.0));
  auto eps = dyadic_eps(8, 64);
  auto r1 = epsilon_sweep(spec, eps, {1, 2}, Sign::positive,
                          SolverKind::shoot1d, 3);
  auto r2 = epsilon_sweep(spec, eps, {1, 2}, Sign::positive,
                          SolverKind::shoot1d, 1);
  REQUIRE(r1.size() == r2.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].eps == r2[i].eps);
    CHECK(r1[i].k == r2[i].k);
    CHECK(r1[i].lambda == r2[i].lambda);  // bitwise equal across job counts
  }
}

TEST_CASE("dyadic refinement stability of passing fits") {
  auto spec = spec_1d(2.0, sin1d());
  auto records = epsilon_sweep(spec, dyadic_eps(8, 256), {1}, Sign::positive,
                               SolverKind::shoot1d, 2);
  auto full = fit_rate(records, Quantity::value);
  auto tail = fit_rate(std::vector<SweepRecord>(records.begin() + 1,
                                                records.end()),
                       Quantity::value);
  CHECK(std::abs(full.slope - tail.slope) <= 0.1);
}

TEST_CASE("2-D sweep through the pencil solver") {
  ProblemSpec spec;
  spec.p = 2.0;
  spec.dim = 2;
  spec.domain = {Interval{0.0, 1.0}, Interval{0.0, 1.0}};
  spec.grid_n = {33, 33};
  spec.weight = PeriodicWeight::trig(2, 2.0, {TrigTerm{1.0, {1, 0}, true}});
  spec.coefficient = CoefficientField::isotropic(2, 2.0);
  auto eps = dyadic_eps(4, 32);
  auto records =
      epsilon_sweep(spec, eps, {1}, Sign::positive, SolverKind::linspec, 2);
  REQUIRE(records.size() == 4);
  // mean 2 weight: converging toward lambda_1(rho = 2) = pi^2 on the square
  double limit = 2.0 * 9.869604401089358 / 2.0;
  for (const auto& r : records) {
    CHECK_FALSE(r.failed);
    CHECK(r.lambda == Catch::Approx(limit).epsilon(0.25));
  }
  auto v = verdict_limit_convergence(records, limit, 0.05);
  INFO(v.details);
  CHECK(v.pass);
}

TEST_CASE("verdicts are pure functions of their records") {
  auto spec = spec_1d(2.0, sin1d());
  auto records = epsilon_sweep(spec, dyadic_eps(8, 64), {1}, Sign::positive,
                               SolverKind::shoot1d, 2);
  auto st = weight_stats(spec.weight);
  auto v1 = verdict_divergence(records, st, 2.0);
  auto v2 = verdict_divergence(records, st, 2.0);
  CHECK(v1.pass == v2.pass);
  CHECK(v1.details == v2.details);
  CHECK(v1.consumed == v2.consumed);
}

TEST_CASE("sign symmetry audit on a sweep") {
  auto spec = spec_1d(2.0, sin1d(0.5));
  auto eps = dyadic_eps(8, 64);
  auto plus = epsilon_sweep(spec, eps, {1}, Sign::positive,
                            SolverKind::shoot1d, 2);
  auto neg_spec = spec_1d(2.0, sin1d(0.5).negated());
  auto minus = epsilon_sweep(neg_spec, eps, {1}, Sign::negative,
                             SolverKind::shoot1d, 2);
  REQUIRE(plus.size() == minus.size());
  for (std::size_t i = 0; i < plus.size(); ++i)
    CHECK(std::abs(minus[i].lambda) ==
          Catch::Approx(std::abs(plus[i].lambda)).epsilon(1e-8));
}
