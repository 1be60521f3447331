#include <iostream>

#include "CLI11.hpp"
#include "mgt/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Thermoacoustic MGT simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir;
  auto* run = app.add_subcommand("run", "simulate a scenario and write timeseries.csv, summary.json, final_state.csv");
  run->add_option("scenario", scenario_path, "scenario JSON")->required();
  run->add_option("--out", out_dir, "output directory")->required();

  auto* constants = app.add_subcommand("constants", "print the constants ledger as JSON");
  constants->add_option("scenario", scenario_path, "scenario JSON")->required();

  std::string sweep_path;
  auto* sweep = app.add_subcommand("sweep", "parameter sweep against the linear oracle, writes sweep.csv");
  sweep->add_option("sweepspec", sweep_path, "sweep JSON")->required();
  sweep->add_option("--out", out_dir, "output directory")->required();

  mgt::OracleRequest req;
  int cells = 0;
  std::string oracle_scenario;
  auto* oracle = app.add_subcommand("oracle", "per-mode characteristic roots as CSV");
  oracle->add_option("--tau", req.params.tau)->default_val(1.0);
  oracle->add_option("--alpha", req.params.alpha)->default_val(1.0);
  oracle->add_option("--b", req.params.b)->default_val(1.0);
  oracle->add_option("--gamma", req.gamma)->default_val(1.0);
  oracle->add_option("--eps", req.params.eps)->default_val(0.0);
  oracle->add_option("--length", req.length)->default_val(1.0);
  oracle->add_option("--kmax", req.k_max)->default_val(1)->check(CLI::NonNegativeNumber);
  oracle->add_option("--cells", cells, "use the discrete eigenvalue of an N-cell grid");
  oracle->add_option("--scenario", oracle_scenario, "take parameters from a scenario instead");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return mgt::cmd_run(mgt::parse_scenario(mgt::read_text_file(scenario_path)), out_dir, std::cerr);
    }
    if (*constants) {
      return mgt::cmd_constants(mgt::parse_scenario(mgt::read_text_file(scenario_path)), std::cout, std::cerr);
    }
    if (*sweep) {
      return mgt::cmd_sweep(mgt::parse_sweep(mgt::read_text_file(sweep_path)), out_dir, std::cerr);
    }
    if (*oracle) {
      if (!oracle_scenario.empty()) {
        const auto sc = mgt::parse_scenario(mgt::read_text_file(oracle_scenario));
        return mgt::cmd_oracle(sc, req.k_max, oracle->count("--cells") > 0, std::cout, std::cerr);
      }
      if (oracle->count("--cells")) req.cells = cells;
      return mgt::cmd_oracle(req, std::cout, std::cerr);
    }
  } catch (const mgt::Error& e) {
    std::cerr << e.what() << '\n';
    if (e.code() == mgt::Errc::NonConstantGamma) return mgt::kExitNonConstantGamma;
    if (e.code() == mgt::Errc::NotDissipationDominated) return mgt::kExitNotDissipative;
    return mgt::kExitUsage;
  }
  return mgt::kExitUsage;
}
