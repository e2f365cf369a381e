#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "homog/discretize.hpp"
#include "homog/linspec.hpp"
#include "homog/pmin.hpp"
#include "homog/shoot1d.hpp"

using namespace homog;
using std::numbers::pi;

namespace {

PeriodicWeight sin1d(double constant = 0.0, double amp = 1.0) {
  return PeriodicWeight::trig(1, constant, {TrigTerm{amp, {1, 0}, true}});
}

}  // namespace

TEST_CASE("pmin recovers pi^2 on the interval") {
  Grid g = unit_interval_grid(513);
  auto c = CoefficientField::isotropic(1, 2.0);
  auto field = project_weight(PeriodicWeight::constant(1, 1.0), 1.0, g);
  auto e = first_eigenvalue_pmin(c, field, g, Sign::positive);
  CHECK(e.lambda == Catch::Approx(pi * pi).epsilon(1e-3));
}

TEST_CASE("pmin recovers 2 pi^2 on the square") {
  Grid g = unit_square_grid(65);
  auto c = CoefficientField::isotropic(2, 2.0);
  auto field = project_weight(PeriodicWeight::constant(2, 1.0), 1.0, g);
  PminOptions opt;
  opt.restarts = 2;
  auto e = first_eigenvalue_pmin(c, field, g, Sign::positive, opt);
  CHECK(e.lambda == Catch::Approx(2 * pi * pi).epsilon(1e-3));
}

TEST_CASE("pmin at p = 3 matches shoot1d") {
  Grid g = unit_interval_grid(1025);
  auto c = CoefficientField::isotropic(1, 3.0);
  auto field = project_weight(PeriodicWeight::constant(1, 1.0), 1.0, g);
  PminOptions opt;
  opt.restarts = 2;
  auto e = first_eigenvalue_pmin(c, field, g, Sign::positive, opt);
  Problem1D prob;
  prob.p = 3.0;
  auto ref = eigenvalue_1d(prob, 1, Sign::positive);
  CHECK(e.lambda == Catch::Approx(ref.lambda).epsilon(1e-3));
}

TEST_CASE("pmin agrees with linspec on an indefinite weight at p = 2") {
  Grid g = unit_interval_grid(513);
  auto c = CoefficientField::isotropic(1, 2.0);
  auto w = sin1d(0.5);
  auto field = project_weight(w, 0.25, g);
  auto e = first_eigenvalue_pmin(c, field, g, Sign::positive);

  PencilProblem pencil{assemble_stiffness(c, g),
                       assemble_weighted_mass(field, g)};
  auto slice = pencil_spectrum(pencil, 1, Sign::positive);
  CHECK(e.lambda == Catch::Approx(slice.eigenvalues[0]).epsilon(1e-4));

  // negative class via sign symmetry of the same field
  auto en = first_eigenvalue_pmin(c, field, g, Sign::negative);
  auto slice_n = pencil_spectrum(pencil, 1, Sign::negative);
  CHECK(en.lambda < 0.0);
  CHECK(en.lambda == Catch::Approx(slice_n.eigenvalues[0]).epsilon(1e-4));
}

TEST_CASE("rayleigh_general properties") {
  Grid g = unit_interval_grid(257);
  auto c = CoefficientField::isotropic(1, 2.0);
  auto field = project_weight(PeriodicWeight::constant(1, 1.0), 1.0, g);

  // interpolated first eigenfunction gives lambda_1 within mesh error
  auto v = DiscreteFunction::interpolate(
      g, [](Point x) { return std::sin(pi * x[0]); });
  CHECK(rayleigh_general(c, field, v) == Catch::Approx(pi * pi).epsilon(1e-3));

  // exact scale invariance
  DiscreteFunction v2 = v;
  for (auto& x : v2.values()) x *= -17.25;
  CHECK(rayleigh_general(c, field, v2) ==
        Catch::Approx(rayleigh_general(c, field, v)).epsilon(1e-14));

  // negative cone
  std::vector<double> neg(field.size(), -1.0);
  CHECK(rayleigh_general(c, neg, v) < 0.0);

  // null cone error
  std::vector<double> zero(field.size(), 0.0);
  CHECK_THROWS_MATCHES(rayleigh_general(c, zero, v), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::on_null_cone;
                       }));
}

TEST_CASE("descent trace is monotone and certifies the upper bound") {
  Grid g = unit_interval_grid(129);
  auto c = CoefficientField::isotropic(1, 2.5);
  auto field = project_weight(sin1d(2.0), 0.5, g);
  PminOptions opt;
  opt.restarts = 1;
  opt.trace_csv = "pmin_trace_test.csv";
  auto e = first_eigenvalue_pmin(c, field, g, Sign::positive, opt);

  std::ifstream in(opt.trace_csv);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "iteration,energy,step");
  double prev = 1e300;
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string it, en, st;
    std::getline(ss, it, ',');
    std::getline(ss, en, ',');
    std::getline(ss, st, ',');
    double eng = std::stod(en);
    CHECK(eng <= prev * (1 + 1e-14));
    prev = eng;
    ++rows;
  }
  CHECK(rows >= 1);
  std::remove(opt.trace_csv.c_str());

  // any feasible iterate certifies an upper bound for the converged value
  auto mode = DiscreteFunction::interpolate(
      g, [](Point x) { return std::sin(pi * x[0]); });
  CHECK(rayleigh_general(c, field, mode) >= e.lambda - 1e-12);
}

TEST_CASE("pmin error modes") {
  Grid g = unit_interval_grid(65);
  auto c = CoefficientField::isotropic(1, 2.0);
  std::vector<double> negfield(static_cast<std::size_t>(g.cell_count()), -1.0);
  CHECK_THROWS_MATCHES(
      first_eigenvalue_pmin(c, negfield, g, Sign::positive), Error,
      Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.code() == ErrorCode::no_positive_spectrum;
      }));

  // a vanishingly small positive region: the precondition passes but no
  // starting iterate reaches the positive cone
  std::vector<double> sliver(static_cast<std::size_t>(g.cell_count()), -1.0);
  sliver[30] = 1e-20;
  CHECK_THROWS_MATCHES(
      first_eigenvalue_pmin(c, sliver, g, Sign::positive), Error,
      Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.code() == ErrorCode::constraint_unreachable;
      }));

  // an absurd iteration cap surfaces MaxIterations with no converged restart
  auto ones = project_weight(PeriodicWeight::constant(1, 1.0), 1.0, g);
  PminOptions tight;
  tight.max_iter = 1;
  tight.restarts = 1;
  CHECK_THROWS_MATCHES(
      first_eigenvalue_pmin(c, ones, g, Sign::positive, tight), Error,
      Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.code() == ErrorCode::max_iterations;
      }));
}
