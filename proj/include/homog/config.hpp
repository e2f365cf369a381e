#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "homog/coefficient.hpp"
#include "homog/errors.hpp"
#include "homog/harness.hpp"
#include "homog/weights.hpp"

namespace homog {

enum class RunKind { solve, sweep, rates, check, plot };

inline const char* run_kind_name(RunKind k) {
  switch (k) {
    case RunKind::solve: return "solve";
    case RunKind::sweep: return "sweep";
    case RunKind::rates: return "rates";
    case RunKind::check: return "check";
    case RunKind::plot: return "plot";
  }
  return "?";
}

struct OutputPaths {
  std::string records_csv = "records.csv";
  std::string verdicts = "verdicts.json";
  std::string plot_svg = "plot.svg";
  std::string run_record = "run_record.json";
  std::string eigenfunction = "eigenfunction.txt";

  bool operator==(const OutputPaths&) const = default;
};

struct SweepBlock {
  std::vector<double> eps;
  std::vector<int> k{1};
  Sign sign = Sign::positive;

  bool operator==(const SweepBlock&) const = default;
};

struct RunConfig {
  RunKind kind = RunKind::solve;
  ProblemSpec problem;
  SweepBlock sweep;
  SolverKind solver = SolverKind::automatic;
  OutputPaths output;
  long seed = 0;
  int jobs = 1;

  bool operator==(const RunConfig& o) const {
    return kind == o.kind && problem.p == o.problem.p &&
           problem.dim == o.problem.dim &&
           problem.grid_n == o.problem.grid_n &&
           domains_equal(problem.domain, o.problem.domain) &&
           problem.weight == o.problem.weight &&
           problem.coefficient == o.problem.coefficient && sweep == o.sweep &&
           solver == o.solver && output == o.output && seed == o.seed &&
           jobs == o.jobs;
  }

 private:
  static bool domains_equal(const std::vector<Interval>& a,
                            const std::vector<Interval>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].lo != b[i].lo || a[i].hi != b[i].hi) return false;
    return true;
  }
};

namespace detail {

using nlohmann::json;

struct ConfigErrors {
  std::vector<std::string> list;
  void add(const std::string& path, const std::string& msg) {
    list.push_back(path + ": " + msg);
  }
};

inline void check_keys(const json& obj, const std::string& path,
                       const std::vector<std::string>& allowed,
                       ConfigErrors& errs) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const auto& k : allowed) known |= (it.key() == k);
    if (!known) errs.add(path, "unknown key '" + it.key() + "'");
  }
}

inline std::optional<PeriodicWeight> parse_weight(const json& j, int dim,
                                                  const std::string& path,
                                                  ConfigErrors& errs) {
  if (!j.is_object()) {
    errs.add(path, "expected an object");
    return std::nullopt;
  }
  std::string kind = j.value("kind", "");
  try {
    if (kind == "constant") {
      check_keys(j, path, {"kind", "value"}, errs);
      if (!j.contains("value")) {
        errs.add(path, "constant weight needs 'value'");
        return std::nullopt;
      }
      return PeriodicWeight::constant(dim, j.at("value").get<double>());
    }
    if (kind == "piecewise") {
      check_keys(j, path, {"kind", "cells_per_axis", "values"}, errs);
      if (!j.contains("cells_per_axis") || !j.contains("values")) {
        errs.add(path, "piecewise weight needs 'cells_per_axis' and 'values'");
        return std::nullopt;
      }
      return PeriodicWeight::piecewise(
          dim, j.at("cells_per_axis").get<int>(),
          j.at("values").get<std::vector<double>>());
    }
    if (kind == "trig") {
      check_keys(j, path, {"kind", "constant", "terms"}, errs);
      std::vector<TrigTerm> terms;
      for (const auto& t : j.value("terms", json::array())) {
        check_keys(t, path + ".terms[]", {"type", "freq", "amplitude"}, errs);
        TrigTerm term;
        std::string type = t.value("type", "sin");
        if (type != "sin" && type != "cos")
          errs.add(path, "trig term type must be 'sin' or 'cos'");
        term.is_sin = type == "sin";
        term.amplitude = t.value("amplitude", 0.0);
        auto freq = t.value("freq", std::vector<int>{});
        if (static_cast<int>(freq.size()) != dim)
          errs.add(path, "trig term freq must have one entry per axis");
        for (std::size_t i = 0; i < freq.size() && i < 2; ++i)
          term.freq[i] = freq[i];
        terms.push_back(term);
      }
      if (!errs.list.empty()) return std::nullopt;
      return PeriodicWeight::trig(dim, j.value("constant", 0.0),
                                  std::move(terms));
    }
    errs.add(path, "weight kind must be constant|piecewise|trig");
  } catch (const Error& e) {
    errs.add(path, e.what());
  } catch (const json::exception& e) {
    errs.add(path, e.what());
  }
  return std::nullopt;
}

inline json weight_to_json(const PeriodicWeight& w) {
  json j;
  switch (w.kind()) {
    case PeriodicWeight::Kind::constant:
      j["kind"] = "constant";
      j["value"] = w.constant_term();
      break;
    case PeriodicWeight::Kind::piecewise:
      j["kind"] = "piecewise";
      j["cells_per_axis"] = w.piecewise_cells();
      j["values"] = w.piecewise_values();
      break;
    case PeriodicWeight::Kind::trig: {
      j["kind"] = "trig";
      j["constant"] = w.constant_term();
      json terms = json::array();
      for (const auto& t : w.trig_terms()) {
        json jt;
        jt["type"] = t.is_sin ? "sin" : "cos";
        jt["amplitude"] = t.amplitude;
        std::vector<int> freq(static_cast<std::size_t>(w.dimension()));
        for (int i = 0; i < w.dimension(); ++i) freq[i] = t.freq[i];
        jt["freq"] = freq;
        terms.push_back(jt);
      }
      j["terms"] = terms;
      break;
    }
  }
  return j;
}

inline std::optional<CoefficientField> parse_coefficient(
    const json& j, int dim, double p, const std::string& path,
    ConfigErrors& errs) {
  if (!j.is_object()) {
    errs.add(path, "expected an object");
    return std::nullopt;
  }
  std::string kind = j.value("kind", "isotropic");
  try {
    if (kind == "isotropic") {
      check_keys(j, path, {"kind", "value"}, errs);
      return CoefficientField::isotropic(dim, p, j.value("value", 1.0));
    }
    if (kind == "periodic") {
      check_keys(j, path, {"kind", "a11", "a12", "a22", "alpha", "beta"},
                 errs);
      if (!j.contains("a11") || !j.contains("alpha") || !j.contains("beta")) {
        errs.add(path, "periodic coefficient needs 'a11', 'alpha', 'beta'");
        return std::nullopt;
      }
      auto a11 = parse_weight(j.at("a11"), dim, path + ".a11", errs);
      auto a12 = j.contains("a12")
                     ? parse_weight(j.at("a12"), dim, path + ".a12", errs)
                     : PeriodicWeight::constant(dim, 0.0);
      auto a22 = j.contains("a22")
                     ? parse_weight(j.at("a22"), dim, path + ".a22", errs)
                     : PeriodicWeight::constant(dim, 1.0);
      if (!a11 || !a12 || !a22) return std::nullopt;
      return CoefficientField::periodic(dim, p, *a11, *a12, *a22,
                                        j.at("alpha").get<double>(),
                                        j.at("beta").get<double>());
    }
    errs.add(path, "coefficient kind must be isotropic|periodic");
  } catch (const Error& e) {
    errs.add(path, e.what());
  } catch (const json::exception& e) {
    errs.add(path, e.what());
  }
  return std::nullopt;
}

inline json coefficient_to_json(const CoefficientField& c) {
  json j;
  bool iso = c.a11().kind() == PeriodicWeight::Kind::constant &&
             c.a12().kind() == PeriodicWeight::Kind::constant &&
             c.a12().constant_term() == 0.0 &&
             c.a22().kind() == PeriodicWeight::Kind::constant &&
             c.a11().constant_term() == c.a22().constant_term() &&
             c.alpha() == c.beta() && c.alpha() == c.a11().constant_term();
  if (iso) {
    j["kind"] = "isotropic";
    j["value"] = c.a11().constant_term();
  } else {
    j["kind"] = "periodic";
    j["a11"] = weight_to_json(c.a11());
    j["a12"] = weight_to_json(c.a12());
    j["a22"] = weight_to_json(c.a22());
    j["alpha"] = c.alpha();
    j["beta"] = c.beta();
  }
  return j;
}

}  // namespace detail

/// Parse and validate a run configuration document (JSON). Unknown keys are
/// rejected and all validation problems are reported together.
inline RunConfig parse_config(const std::string& text) {
  using nlohmann::json;
  detail::ConfigErrors errs;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(ErrorCode::config_invalid, std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) raise(ErrorCode::config_invalid, "top level must be an object");

  RunConfig cfg;
  try {
  detail::check_keys(
      j, "$", {"kind", "problem", "sweep", "solver", "output", "seed", "jobs"},
      errs);

  std::string kind = j.value("kind", "");
  if (kind == "solve") cfg.kind = RunKind::solve;
  else if (kind == "sweep") cfg.kind = RunKind::sweep;
  else if (kind == "rates") cfg.kind = RunKind::rates;
  else if (kind == "check") cfg.kind = RunKind::check;
  else if (kind == "plot") cfg.kind = RunKind::plot;
  else errs.add("$.kind", "must be solve|sweep|rates|check|plot");

  // problem block (optional for check/plot)
  if (j.contains("problem")) {
    const json& p = j.at("problem");
    detail::check_keys(
        p, "$.problem",
        {"p", "dimension", "domain", "grid_n", "weight", "coefficient"}, errs);
    cfg.problem.p = p.value("p", 2.0);
    if (!(cfg.problem.p > 1.0)) errs.add("$.problem.p", "p must exceed 1");
    cfg.problem.dim = p.value("dimension", 1);
    if (cfg.problem.dim != 1 && cfg.problem.dim != 2)
      errs.add("$.problem.dimension", "dimension must be 1 or 2");
    else {
      cfg.problem.domain.clear();
      if (p.contains("domain")) {
        for (const auto& d : p.at("domain")) {
          if (!d.is_array() || d.size() != 2)
            errs.add("$.problem.domain", "each axis needs [lo, hi]");
          else
            cfg.problem.domain.push_back(
                Interval{d[0].get<double>(), d[1].get<double>()});
        }
      } else {
        for (int a = 0; a < cfg.problem.dim; ++a)
          cfg.problem.domain.push_back(Interval{0.0, 1.0});
      }
      if (static_cast<int>(cfg.problem.domain.size()) != cfg.problem.dim)
        errs.add("$.problem.domain", "one [lo,hi] pair per axis required");
      for (const auto& d : cfg.problem.domain)
        if (!(d.hi > d.lo)) errs.add("$.problem.domain", "hi must exceed lo");

      cfg.problem.grid_n = p.value("grid_n", std::vector<int>{});
      if (cfg.problem.grid_n.empty())
        cfg.problem.grid_n.assign(static_cast<std::size_t>(cfg.problem.dim),
                                  cfg.problem.dim == 1 ? 513 : 65);
      if (static_cast<int>(cfg.problem.grid_n.size()) != cfg.problem.dim)
        errs.add("$.problem.grid_n", "one node count per axis required");
      for (int n : cfg.problem.grid_n)
        if (n < 3) errs.add("$.problem.grid_n", "need at least 3 nodes per axis");

      if (cfg.problem.dim >= 1 && (cfg.problem.p > 1.0)) {
        if (p.contains("weight")) {
          auto w = detail::parse_weight(p.at("weight"), cfg.problem.dim,
                                        "$.problem.weight", errs);
          if (w) cfg.problem.weight = *w;
        } else {
          cfg.problem.weight = PeriodicWeight::constant(cfg.problem.dim, 1.0);
        }
        if (p.contains("coefficient")) {
          auto c = detail::parse_coefficient(p.at("coefficient"),
                                             cfg.problem.dim, cfg.problem.p,
                                             "$.problem.coefficient", errs);
          if (c) cfg.problem.coefficient = *c;
        } else {
          cfg.problem.coefficient =
              CoefficientField::isotropic(cfg.problem.dim, cfg.problem.p);
        }
      }
    }
  } else if (cfg.kind == RunKind::solve || cfg.kind == RunKind::sweep ||
             cfg.kind == RunKind::rates) {
    errs.add("$", "a problem block is required for solve/sweep/rates");
  }

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    detail::check_keys(s, "$.sweep", {"eps", "k", "sign"}, errs);
    cfg.sweep.eps = s.value("eps", std::vector<double>{});
    cfg.sweep.k = s.value("k", std::vector<int>{1});
    std::string sg = s.value("sign", "+");
    if (sg == "+") cfg.sweep.sign = Sign::positive;
    else if (sg == "-") cfg.sweep.sign = Sign::negative;
    else errs.add("$.sweep.sign", "sign must be '+' or '-'");
    for (int k : cfg.sweep.k)
      if (k < 1) errs.add("$.sweep.k", "k entries must be >= 1");
    for (std::size_t i = 0; i + 1 < cfg.sweep.eps.size(); ++i)
      if (!(cfg.sweep.eps[i] > cfg.sweep.eps[i + 1]))
        errs.add("$.sweep.eps", "eps list must be strictly decreasing");
    for (double e : cfg.sweep.eps)
      if (!(e > 0.0)) errs.add("$.sweep.eps", "eps entries must be positive");
  }

  if (cfg.kind == RunKind::solve && cfg.sweep.eps.empty())
    errs.add("$.sweep.eps", "solve needs one eps value");
  if ((cfg.kind == RunKind::sweep || cfg.kind == RunKind::rates) &&
      cfg.sweep.eps.size() < 4)
    errs.add("$.sweep.eps", "sweep/rates need at least 4 eps values");

  std::string solver = j.value("solver", "auto");
  if (solver == "auto") cfg.solver = SolverKind::automatic;
  else if (solver == "shoot1d") cfg.solver = SolverKind::shoot1d;
  else if (solver == "linspec") cfg.solver = SolverKind::linspec;
  else if (solver == "pmin") cfg.solver = SolverKind::pmin;
  else errs.add("$.solver", "solver must be auto|shoot1d|linspec|pmin");

  // solver applicability for every requested k (before any solve)
  if ((cfg.kind == RunKind::solve || cfg.kind == RunKind::sweep ||
       cfg.kind == RunKind::rates) &&
      errs.list.empty()) {
    for (int k : cfg.sweep.k) {
      try {
        resolve_solver(cfg.solver, cfg.problem.p, cfg.problem.dim, k);
      } catch (const Error& e) {
        errs.add("$.solver", e.what());
      }
    }
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    detail::check_keys(o, "$.output",
                       {"records_csv", "verdicts", "plot_svg", "run_record",
                        "eigenfunction"},
                       errs);
    cfg.output.records_csv = o.value("records_csv", cfg.output.records_csv);
    cfg.output.verdicts = o.value("verdicts", cfg.output.verdicts);
    cfg.output.plot_svg = o.value("plot_svg", cfg.output.plot_svg);
    cfg.output.run_record = o.value("run_record", cfg.output.run_record);
    cfg.output.eigenfunction =
        o.value("eigenfunction", cfg.output.eigenfunction);
  }

  cfg.seed = j.value("seed", 0L);
  cfg.jobs = j.value("jobs", 1);
  if (cfg.jobs < 1) errs.add("$.jobs", "jobs must be >= 1");
  } catch (const nlohmann::json::exception& e) {
    errs.add("$", std::string("malformed field: ") + e.what());
  }

  if (!errs.list.empty()) {
    std::string all = "configuration invalid:";
    for (const auto& e : errs.list) all += "\n  - " + e;
    raise(ErrorCode::config_invalid, all);
  }
  return cfg;
}

inline std::string serialize_config(const RunConfig& cfg) {
  using nlohmann::json;
  json j;
  j["kind"] = run_kind_name(cfg.kind);
  json p;
  p["p"] = cfg.problem.p;
  p["dimension"] = cfg.problem.dim;
  json dom = json::array();
  for (const auto& d : cfg.problem.domain)
    dom.push_back(json::array({d.lo, d.hi}));
  p["domain"] = dom;
  p["grid_n"] = cfg.problem.grid_n;
  p["weight"] = detail::weight_to_json(cfg.problem.weight);
  p["coefficient"] = detail::coefficient_to_json(cfg.problem.coefficient);
  j["problem"] = p;
  json s;
  s["eps"] = cfg.sweep.eps;
  s["k"] = cfg.sweep.k;
  s["sign"] = sign_name(cfg.sweep.sign);
  j["sweep"] = s;
  j["solver"] = solver_name(cfg.solver);
  json o;
  o["records_csv"] = cfg.output.records_csv;
  o["verdicts"] = cfg.output.verdicts;
  o["plot_svg"] = cfg.output.plot_svg;
  o["run_record"] = cfg.output.run_record;
  o["eigenfunction"] = cfg.output.eigenfunction;
  j["output"] = o;
  j["seed"] = cfg.seed;
  j["jobs"] = cfg.jobs;
  return j.dump(2);
}

}  // namespace homog
