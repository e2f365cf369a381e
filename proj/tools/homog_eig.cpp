// homog_eig: configuration-driven laboratory for positive/negative
// variational eigenvalues of quasilinear problems with sign-changing
// periodic weights.
//
// Subcommands: solve, sweep, rates, check, plot. Run-configuration files
// are strict JSON; see README.md for a complete example.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "homog/config.hpp"
#include "homog/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<long> seed;
  std::optional<int> jobs;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "run configuration (JSON)")
      ->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--jobs", args.jobs,
                  "parallel solves (fallback: HOMOG_EIG_JOBS)");
}

int dispatch(homog::RunKind kind, const CommonArgs& args) {
  std::ifstream in(args.config_path);
  if (!in.good())
    throw homog::Error(homog::ErrorCode::file_missing,
                       "config not found: " + args.config_path);
  std::stringstream ss;
  ss << in.rdbuf();
  homog::RunConfig cfg = homog::parse_config(ss.str());
  if (cfg.kind != kind)
    throw homog::Error(homog::ErrorCode::config_invalid,
                       std::string("config kind '") +
                           homog::run_kind_name(cfg.kind) +
                           "' does not match the subcommand");
  if (args.seed) cfg.seed = *args.seed;
  if (args.jobs) {
    cfg.jobs = *args.jobs;
  } else if (const char* env = std::getenv("HOMOG_EIG_JOBS")) {
    int j = std::atoi(env);
    if (j >= 1) cfg.jobs = j;
  }
  return homog::run(cfg, args.out_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eigenvalue laboratory for indefinite-weight quasilinear "
               "problems"};
  app.require_subcommand(1);

  CommonArgs solve_args, sweep_args, rates_args, check_args, plot_args;
  add_common(app.add_subcommand("solve", "one eigenpair, write a run record"),
             solve_args);
  add_common(app.add_subcommand("sweep", "eps sweep, write records CSV"),
             sweep_args);
  add_common(app.add_subcommand(
                 "rates", "eps sweep + rate fits + theorem verdicts + plot"),
             rates_args);
  add_common(app.add_subcommand("check", "seeded property suites"),
             check_args);
  add_common(app.add_subcommand("plot", "render a records CSV to SVG"),
             plot_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("solve"))
      return dispatch(homog::RunKind::solve, solve_args);
    if (app.got_subcommand("sweep"))
      return dispatch(homog::RunKind::sweep, sweep_args);
    if (app.got_subcommand("rates"))
      return dispatch(homog::RunKind::rates, rates_args);
    if (app.got_subcommand("check"))
      return dispatch(homog::RunKind::check, check_args);
    if (app.got_subcommand("plot"))
      return dispatch(homog::RunKind::plot, plot_args);
  } catch (const homog::Error& e) {
    nlohmann::json err;
    err["error"]["type"] = homog::error_code_name(e.code());
    err["error"]["message"] = e.what();
    std::cerr << err.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"]["type"] = "Unexpected";
    err["error"]["message"] = e.what();
    std::cerr << err.dump(2) << "\n";
    return 3;
  }
  return 1;
}
