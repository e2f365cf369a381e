#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "homog/checks.hpp"
#include "homog/config.hpp"
#include "homog/harness.hpp"
#include "homog/svg.hpp"

namespace homog {

namespace detail {

inline std::string join_path(const std::string& dir, const std::string& file) {
  if (file.empty() || file.front() == '/') return file;
  return (std::filesystem::path(dir) / file).string();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  require(os.good(), ErrorCode::io_failure, "cannot open " + path);
  os << text;
}

inline nlohmann::json verdict_to_json(const Verdict& v) {
  nlohmann::json j;
  j["claim"] = v.claim;
  j["pass"] = v.pass;
  j["details"] = v.details;
  j["consumed"] = v.consumed;
  return j;
}

inline nlohmann::json record_to_json(const SweepRecord& r) {
  nlohmann::json j;
  j["epsilon"] = r.eps;
  j["k"] = r.k;
  j["sign"] = sign_name(r.sign);
  if (r.failed) {
    j["error"] = r.error;
  } else {
    j["lambda"] = r.lambda;
    j["residual"] = r.residual;
  }
  j["solver"] = r.solver;
  j["wall_time"] = r.wall_time;
  return j;
}

inline void export_eigenfunction(const std::string& path,
                                 const DiscreteFunction& u) {
  std::ofstream os(path);
  require(os.good(), ErrorCode::io_failure, "cannot open " + path);
  char buf[80];
  const Grid& g = u.grid();
  if (g.dimension() == 1) {
    for (int i = 0; i < g.nodes(0); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", g.node_coord(0, i),
                    u.node_value(i));
      os << buf;
    }
  } else {
    for (int j = 0; j < g.nodes(1); ++j)
      for (int i = 0; i < g.nodes(0); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n",
                      g.node_coord(0, i), g.node_coord(1, j),
                      u.node_value(i, j));
        os << buf;
      }
  }
}

inline ShootOptions shoot_options_for(const RunConfig&) { return {}; }

inline LanczosOptions lanczos_options_for(const RunConfig& cfg) {
  LanczosOptions o;
  o.seed = 0x9e3779b97f4a7c15ull ^ (static_cast<std::uint64_t>(cfg.seed) * 0x100000001b3ull);
  return o;
}

inline PminOptions pmin_options_for(const RunConfig& cfg) {
  PminOptions o;
  o.seed = 0x5851f42d4c957f2dull ^ (static_cast<std::uint64_t>(cfg.seed) * 0x1000193ull);
  return o;
}

/// Solve the first (eps, k) instance keeping the eigenfunction and any
/// solver-specific diagnostics for the run record.
struct SolveDetail {
  SweepRecord record;
  DiscreteFunction eigenfunction;
  nlohmann::json diagnostics = nlohmann::json::object();
};

inline SolveDetail solve_with_function(const RunConfig& cfg) {
  const ProblemSpec& spec = cfg.problem;
  double eps = cfg.sweep.eps.front();
  int k = cfg.sweep.k.front();
  Sign sign = cfg.sweep.sign;
  SolverKind s = resolve_solver(cfg.solver, spec.p, spec.dim, k);

  SolveDetail out;
  SweepRecord& rec = out.record;
  DiscreteFunction& fn = out.eigenfunction;
  rec.eps = eps;
  rec.k = k;
  rec.sign = sign;
  rec.solver = solver_name(s);
  auto t0 = std::chrono::steady_clock::now();
  switch (s) {
    case SolverKind::shoot1d: {
      Problem1D prob;
      prob.p = spec.p;
      prob.coefficient = spec.coefficient.a11();
      prob.weight = spec.weight;
      prob.eps = eps;
      prob.domain = spec.domain.at(0);
      EigenPair e = eigenvalue_1d(prob, k, sign, shoot_options_for(cfg));
      rec.lambda = e.lambda;
      rec.residual = e.residual;
      out.diagnostics["bisection_width"] = e.bisection_width;
      fn = e.eigenfunction;
      break;
    }
    case SolverKind::linspec: {
      Grid g = build_grid(spec.dim, spec.domain, spec.grid_n);
      PencilProblem pencil{
          assemble_stiffness(spec.coefficient.with_p(2.0), g),
          assemble_weighted_mass(project_weight(spec.weight, eps, g), g)};
      auto slice = pencil_spectrum(pencil, k, sign, lanczos_options_for(cfg));
      require(static_cast<int>(slice.eigenvalues.size()) >= k,
              sign == Sign::positive ? ErrorCode::no_positive_spectrum
                                     : ErrorCode::no_negative_spectrum,
              "fewer than k eigenvalues of the requested sign");
      rec.lambda = slice.eigenvalues[static_cast<std::size_t>(k - 1)];
      rec.residual = slice.ritz_residuals[static_cast<std::size_t>(k - 1)];
      fn = DiscreteFunction(
          g, slice.eigenvectors[static_cast<std::size_t>(k - 1)]);
      break;
    }
    case SolverKind::pmin: {
      Grid g = build_grid(spec.dim, spec.domain, spec.grid_n);
      auto field = project_weight(spec.weight, eps, g);
      PminOptions popt = pmin_options_for(cfg);
      EigenPair e =
          first_eigenvalue_pmin(spec.coefficient, field, g, sign, popt);
      rec.lambda = e.lambda;
      rec.residual = e.residual;
      out.diagnostics["restarts"] = popt.restarts;
      fn = e.eigenfunction;
      break;
    }
    case SolverKind::automatic:
      break;
  }
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

/// Limit eigenvalue lambda_k(rho_bar): the same problem with the constant
/// mean weight, solved by the same solver family (and grid, when any).
inline double limit_eigenvalue(const RunConfig& cfg, int k) {
  RunConfig limit = cfg;
  limit.problem.weight =
      PeriodicWeight::constant(cfg.problem.dim, cfg.problem.weight.exact_mean());
  limit.sweep.eps = {1.0};
  limit.sweep.k = {k};
  return solve_with_function(limit).record.lambda;
}

inline std::vector<Verdict> rates_verdicts(const RunConfig& cfg,
                                           const std::vector<SweepRecord>& all) {
  std::vector<Verdict> verdicts;
  auto stats = weight_stats(cfg.problem.weight);
  for (int k : cfg.sweep.k) {
    std::vector<SweepRecord> rs;
    for (const auto& r : all)
      if (r.k == k) rs.push_back(r);

    bool all_gap = !rs.empty();
    bool any_gap = false;
    for (const auto& r : rs) {
      all_gap = all_gap && r.failed;
      any_gap = any_gap || r.failed;
    }
    if (all_gap) {
      verdicts.push_back(verdict_no_positive_spectrum(rs));
      continue;
    }
    if (any_gap) {
      Verdict v;
      v.claim = "T1.2-case1";
      v.pass = false;
      v.details = "sweep contains gap rows; cannot classify";
      for (const auto& r : rs) v.consumed.push_back(detail::record_key(r));
      verdicts.push_back(std::move(v));
      continue;
    }

    bool convergent =
        (cfg.sweep.sign == Sign::positive &&
         stats.sign_class == MeanSign::positive) ||
        (cfg.sweep.sign == Sign::negative &&
         stats.sign_class == MeanSign::negative);
    if (convergent) {
      double limit = limit_eigenvalue(cfg, k);
      verdicts.push_back(verdict_rate_convergence(rs, limit));
      verdicts.push_back(verdict_limit_convergence(rs, limit));
    } else {
      verdicts.push_back(verdict_divergence(rs, stats, cfg.problem.p));
    }
  }
  return verdicts;
}

inline void write_rates_plot(const RunConfig& cfg, const std::string& path,
                             const std::vector<SweepRecord>& records) {
  std::vector<PlotSeries> series;
  for (int k : cfg.sweep.k) {
    PlotSeries s;
    s.label = "k=" + std::to_string(k) + " " + sign_name(cfg.sweep.sign);
    std::vector<SweepRecord> rs;
    for (const auto& r : records)
      if (r.k == k && !r.failed) {
        rs.push_back(r);
        s.points.emplace_back(r.eps, std::abs(r.lambda));
      }
    if (rs.size() >= 2) {
      auto fit = fit_rate(rs, Quantity::value);
      s.fitted_slope = fit.slope;
      s.fitted_intercept = fit.intercept;
    } else {
      s.draw_fit = false;
    }
    series.push_back(std::move(s));
  }
  write_loglog_svg(path, "eigenvalue sweep (log-log, fitted slopes)", series,
                   "eps", "|lambda|");
}

}  // namespace detail

/// Execute a validated configuration; artifacts land under out_dir. Returns
/// the process exit status (0 on success / all verdicts passing).
inline int run(const RunConfig& cfg, const std::string& out_dir = ".") {
  using nlohmann::json;
  std::filesystem::create_directories(out_dir);
  json record;
  record["config"] = json::parse(serialize_config(cfg));

  switch (cfg.kind) {
    case RunKind::solve: {
      auto solved = detail::solve_with_function(cfg);
      const SweepRecord& rec = solved.record;
      record["result"] = detail::record_to_json(rec);
      if (!solved.diagnostics.empty())
        record["result"]["diagnostics"] = solved.diagnostics;
      std::string fn_path =
          detail::join_path(out_dir, cfg.output.eigenfunction);
      detail::export_eigenfunction(fn_path, solved.eigenfunction);
      record["artifacts"] = {fn_path};
      detail::write_text(detail::join_path(out_dir, cfg.output.run_record),
                         record.dump(2) + "\n");
      std::cout << "lambda_" << rec.k << "^" << sign_name(rec.sign) << " = "
                << rec.lambda << "  (solver " << rec.solver << ", residual "
                << rec.residual << ")\n";
      return 0;
    }

    case RunKind::sweep:
    case RunKind::rates: {
      auto records = epsilon_sweep(
          cfg.problem, cfg.sweep.eps, cfg.sweep.k, cfg.sweep.sign, cfg.solver,
          cfg.jobs, detail::shoot_options_for(cfg),
          detail::lanczos_options_for(cfg), detail::pmin_options_for(cfg));
      std::string csv_path = detail::join_path(out_dir, cfg.output.records_csv);
      write_records_csv(csv_path, records);
      json jrecords = json::array();
      for (const auto& r : records) jrecords.push_back(detail::record_to_json(r));
      record["records"] = jrecords;
      record["artifacts"] = {csv_path};

      int exit_code = 0;
      if (cfg.kind == RunKind::rates) {
        auto verdicts = detail::rates_verdicts(cfg, records);
        json jv = json::array();
        bool all_pass = true;
        for (const auto& v : verdicts) {
          jv.push_back(detail::verdict_to_json(v));
          all_pass = all_pass && v.pass;
          std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << v.claim << "  "
                    << v.details << "\n";
        }
        json vdoc;
        vdoc["kind"] = "rates";
        vdoc["claims"] = jv;
        vdoc["all_pass"] = all_pass;
        std::string vpath = detail::join_path(out_dir, cfg.output.verdicts);
        detail::write_text(vpath, vdoc.dump(2) + "\n");
        record["verdicts"] = vdoc;
        std::string plot_path = detail::join_path(out_dir, cfg.output.plot_svg);
        detail::write_rates_plot(cfg, plot_path, records);
        exit_code = all_pass ? 0 : 1;
      } else {
        std::cout << records.size() << " records -> " << csv_path << "\n";
      }
      detail::write_text(detail::join_path(out_dir, cfg.output.run_record),
                         record.dump(2) + "\n");
      return exit_code;
    }

    case RunKind::check: {
      auto results =
          run_property_checks(static_cast<std::uint64_t>(cfg.seed));
      json jr = json::array();
      bool all_pass = true;
      for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "  "
                  << r.details << "\n";
        json one;
        one["name"] = r.name;
        one["pass"] = r.pass;
        one["details"] = r.details;
        jr.push_back(one);
      }
      json vdoc;
      vdoc["kind"] = "check";
      vdoc["checks"] = jr;
      vdoc["all_pass"] = all_pass;
      detail::write_text(detail::join_path(out_dir, cfg.output.verdicts),
                         vdoc.dump(2) + "\n");
      return all_pass ? 0 : 1;
    }

    case RunKind::plot: {
      std::string csv_path = detail::join_path(out_dir, cfg.output.records_csv);
      require(std::filesystem::exists(csv_path), ErrorCode::file_missing,
              "records file not found: " + csv_path);
      auto records = read_records_csv(csv_path);
      // group by (k, sign)
      std::vector<std::pair<int, Sign>> groups;
      for (const auto& r : records) {
        std::pair<int, Sign> g{r.k, r.sign};
        bool seen = false;
        for (const auto& h : groups) seen |= h == g;
        if (!seen) groups.push_back(g);
      }
      std::vector<PlotSeries> series;
      for (auto [k, sign] : groups) {
        PlotSeries s;
        s.label = "k=" + std::to_string(k) + " " + sign_name(sign);
        std::vector<SweepRecord> rs;
        for (const auto& r : records)
          if (r.k == k && r.sign == sign && !r.failed) {
            rs.push_back(r);
            s.points.emplace_back(r.eps, std::abs(r.lambda));
          }
        if (rs.size() >= 2) {
          auto fit = fit_rate(rs, Quantity::value);
          s.fitted_slope = fit.slope;
          s.fitted_intercept = fit.intercept;
        } else {
          s.draw_fit = false;
        }
        series.push_back(std::move(s));
      }
      std::string plot_path = detail::join_path(out_dir, cfg.output.plot_svg);
      write_loglog_svg(plot_path, "records " + csv_path, series, "eps",
                       "|lambda|");
      std::cout << "plot -> " << plot_path << "\n";
      return 0;
    }
  }
  return 1;
}

}  // namespace homog
