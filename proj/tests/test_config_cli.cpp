#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "homog/config.hpp"
#include "homog/runner.hpp"

using namespace homog;

namespace {

std::string minimal_solve = R"({
  "kind": "solve",
  "problem": {
    "p": 2.0,
    "dimension": 1,
    "weight": {"kind": "constant", "value": 1.0}
  },
  "sweep": {"eps": [1.0], "k": [1], "sign": "+"}
})";

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// CSV text with the wall_time column blanked (it is the one permitted
/// nondeterminism).
std::string strip_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    auto last = line.rfind(',');
    out += line.substr(0, last) + "\n";
  }
  return out;
}

struct TempDir {
  std::filesystem::path path;
  TempDir(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("minimal solve config parses and resolves to shoot1d") {
  auto cfg = parse_config(minimal_solve);
  CHECK(cfg.kind == RunKind::solve);
  CHECK(cfg.problem.p == 2.0);
  CHECK(resolve_solver(cfg.solver, cfg.problem.p, cfg.problem.dim,
                       cfg.sweep.k[0]) == SolverKind::shoot1d);
}

TEST_CASE("capability matrix rejects p=3, N=2, k=2") {
  std::string text = R"({
    "kind": "sweep",
    "problem": {"p": 3.0, "dimension": 2},
    "sweep": {"eps": [0.5, 0.25, 0.125, 0.0625], "k": [2], "sign": "+"}
  })";
  CHECK_THROWS_WITH(parse_config(text),
                    Catch::Matchers::ContainsSubstring("solver"));
}

TEST_CASE("rates config with a short eps list is rejected") {
  std::string text = R"({
    "kind": "rates",
    "problem": {"p": 2.0, "dimension": 1},
    "sweep": {"eps": [0.5, 0.25], "k": [1], "sign": "+"}
  })";
  CHECK_THROWS_WITH(parse_config(text),
                    Catch::Matchers::ContainsSubstring("at least 4"));
}

TEST_CASE("unknown keys are rejected and all errors are reported") {
  std::string text = R"({
    "kind": "solve",
    "problem": {"p": 0.5, "dimension": 7, "typo_key": 1},
    "sweep": {"eps": [], "k": [0], "sign": "?"},
    "another_typo": true
  })";
  try {
    parse_config(text);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    std::string msg = e.what();
    CHECK(msg.find("typo_key") != std::string::npos);
    CHECK(msg.find("another_typo") != std::string::npos);
    CHECK(msg.find("p must exceed 1") != std::string::npos);
    CHECK(msg.find("dimension") != std::string::npos);
    CHECK(msg.find("sign") != std::string::npos);
    CHECK(msg.find("k entries") != std::string::npos);
  }
}

TEST_CASE("type-mismatched fields surface as validation errors") {
  std::string text = R"({
    "kind": "solve",
    "problem": {"p": 2.0, "dimension": 1},
    "sweep": {"eps": [1.0], "k": [1], "sign": "+"},
    "seed": "not-a-number"
  })";
  CHECK_THROWS_MATCHES(parse_config(text), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::config_invalid;
                       }));
}

TEST_CASE("config round trip: parse(serialize(cfg)) == cfg") {
  std::string text = R"({
    "kind": "rates",
    "problem": {
      "p": 2.5,
      "dimension": 2,
      "domain": [[0.0, 1.0], [0.0, 2.0]],
      "grid_n": [33, 65],
      "weight": {"kind": "trig", "constant": 2.0,
                 "terms": [{"type": "sin", "freq": [1, 2], "amplitude": 0.5}]},
      "coefficient": {"kind": "periodic",
                      "a11": {"kind": "constant", "value": 2.0},
                      "a12": {"kind": "constant", "value": 0.1},
                      "a22": {"kind": "constant", "value": 1.5},
                      "alpha": 1.0, "beta": 3.0}
    },
    "sweep": {"eps": [0.5, 0.25, 0.125, 0.0625], "k": [1], "sign": "-"},
    "solver": "pmin",
    "output": {"records_csv": "r.csv"},
    "seed": 99,
    "jobs": 4
  })";
  auto cfg = parse_config(text);
  auto cfg2 = parse_config(serialize_config(cfg));
  CHECK(cfg == cfg2);

  auto simple = parse_config(minimal_solve);
  CHECK(simple == parse_config(serialize_config(simple)));

  std::string piecewise = R"({
    "kind": "solve",
    "problem": {
      "p": 3.0,
      "dimension": 1,
      "weight": {"kind": "piecewise", "cells_per_axis": 4,
                 "values": [1.0, -1.0, 2.0, -0.5]}
    },
    "sweep": {"eps": [0.25], "k": [1], "sign": "+"}
  })";
  auto pw = parse_config(piecewise);
  CHECK(pw == parse_config(serialize_config(pw)));
}

TEST_CASE("runner: solve writes the run record and eigenfunction") {
  TempDir dir("homog_cli_solve");
  auto cfg = parse_config(minimal_solve);
  int code = run(cfg, dir.path.string());
  CHECK(code == 0);
  CHECK(std::filesystem::exists(dir.path / "run_record.json"));
  CHECK(std::filesystem::exists(dir.path / "eigenfunction.txt"));
  auto record = read_file((dir.path / "run_record.json").string());
  CHECK(record.find("\"lambda\"") != std::string::npos);
}

TEST_CASE("runner: 2-D linspec solve exports a nodal eigenfunction") {
  std::string text = R"({
    "kind": "solve",
    "problem": {"p": 2.0, "dimension": 2, "grid_n": [17, 17]},
    "sweep": {"eps": [1.0], "k": [1], "sign": "+"},
    "solver": "linspec"
  })";
  TempDir dir("homog_cli_solve2d");
  auto cfg = parse_config(text);
  CHECK(run(cfg, dir.path.string()) == 0);
  std::ifstream fn((dir.path / "eigenfunction.txt").string());
  REQUIRE(fn.good());
  int lines = 0;
  std::string line;
  while (std::getline(fn, line)) ++lines;
  CHECK(lines == 17 * 17);  // x y u per node, boundary included
}

TEST_CASE("runner: sweep CSV is deterministic given config and seed") {
  std::string text = R"({
    "kind": "sweep",
    "problem": {
      "p": 2.0,
      "dimension": 1,
      "grid_n": [257],
      "weight": {"kind": "trig", "constant": 0.5,
                 "terms": [{"type": "sin", "freq": [1], "amplitude": 1.0}]}
    },
    "sweep": {"eps": [0.125, 0.0625, 0.03125, 0.015625], "k": [1, 2], "sign": "+"},
    "solver": "linspec",
    "seed": 1234,
    "jobs": 2
  })";
  TempDir d1("homog_cli_det1"), d2("homog_cli_det2");
  auto cfg = parse_config(text);
  CHECK(run(cfg, d1.path.string()) == 0);
  cfg.jobs = 1;  // parallelism must not affect the records
  CHECK(run(cfg, d2.path.string()) == 0);
  auto csv1 = strip_wall_time(read_file((d1.path / "records.csv").string()));
  auto csv2 = strip_wall_time(read_file((d2.path / "records.csv").string()));
  CHECK(csv1 == csv2);
  CHECK(csv1.find("nan") == std::string::npos);
}

TEST_CASE("runner: rates on a divergent family passes the case-1 verdict") {
  std::string text = R"({
    "kind": "rates",
    "problem": {
      "p": 2.0,
      "dimension": 1,
      "weight": {"kind": "trig",
                 "terms": [{"type": "sin", "freq": [1], "amplitude": 1.0}]}
    },
    "sweep": {"eps": [0.125, 0.0625, 0.03125, 0.015625, 0.0078125],
               "k": [1], "sign": "+"},
    "solver": "shoot1d"
  })";
  TempDir dir("homog_cli_rates");
  auto cfg = parse_config(text);
  CHECK(run(cfg, dir.path.string()) == 0);
  auto verdicts = read_file((dir.path / "verdicts.json").string());
  CHECK(verdicts.find("T1.2-case1") != std::string::npos);
  CHECK(verdicts.find("\"all_pass\": true") != std::string::npos);
  CHECK(std::filesystem::exists(dir.path / "plot.svg"));
}

TEST_CASE("runner: negative sequence converges to the negative-mean limit") {
  // rho = -2 + sin has mean -2 and a nontrivial negative part, so the
  // negative eigenvalues converge to those of the constant weight -2:
  // lambda_k^- -> -k^2 pi^2 / 2
  std::string text = R"({
    "kind": "rates",
    "problem": {
      "p": 2.0,
      "dimension": 1,
      "weight": {"kind": "trig", "constant": -2.0,
                 "terms": [{"type": "sin", "freq": [1], "amplitude": 1.0}]}
    },
    "sweep": {"eps": [0.125, 0.0625, 0.03125, 0.015625, 0.0078125],
               "k": [1], "sign": "-"},
    "solver": "shoot1d"
  })";
  TempDir dir("homog_cli_neg");
  auto cfg = parse_config(text);
  CHECK(run(cfg, dir.path.string()) == 0);
  auto verdicts = read_file((dir.path / "verdicts.json").string());
  CHECK(verdicts.find("T1.3-rate") != std::string::npos);
  CHECK(verdicts.find("\"all_pass\": true") != std::string::npos);
  auto records = read_records_csv((dir.path / "records.csv").string());
  double pi2 = 9.869604401089358;
  CHECK(records.back().lambda ==
        Catch::Approx(-pi2 / 2.0).epsilon(1e-3));
}

TEST_CASE("runner: rates flags an empty negative spectrum as divergence") {
  // rho = 2 + sin >= 1 has no negative part; the negative sequence does
  // not exist at any eps and the divergent-branch verdict passes
  std::string text = R"({
    "kind": "rates",
    "problem": {
      "p": 2.0,
      "dimension": 1,
      "grid_n": [129],
      "weight": {"kind": "trig", "constant": 2.0,
                 "terms": [{"type": "sin", "freq": [1], "amplitude": 1.0}]}
    },
    "sweep": {"eps": [0.25, 0.125, 0.0625, 0.03125], "k": [1], "sign": "-"},
    "solver": "linspec"
  })";
  TempDir dir("homog_cli_neg_empty");
  auto cfg = parse_config(text);
  CHECK(run(cfg, dir.path.string()) == 0);
  auto verdicts = read_file((dir.path / "verdicts.json").string());
  CHECK(verdicts.find("T1.1-div") != std::string::npos);
  CHECK(verdicts.find("\"all_pass\": true") != std::string::npos);
}

TEST_CASE("runner: plot fails cleanly on a missing records file") {
  TempDir dir("homog_cli_plot");
  RunConfig cfg;
  cfg.kind = RunKind::plot;
  cfg.output.records_csv = "does_not_exist.csv";
  try {
    run(cfg, dir.path.string());
    FAIL("expected FileMissing");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::file_missing);
  }
}
