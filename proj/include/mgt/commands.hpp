#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mgt/constants.hpp"
#include "mgt/diagnostics.hpp"
#include "mgt/scenario.hpp"

#include "json.hpp"

namespace mgt {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitBlowUp = 2;
inline constexpr int kExitNumericalFailure = 3;
inline constexpr int kExitNotDissipative = 4;
inline constexpr int kExitNonConstantGamma = 5;

int exit_code(RunStatus status);

nlohmann::json to_json(const ConstantsLedger& ledger);
nlohmann::json to_json(const Scenario& scenario);
nlohmann::json to_json(const DecayFit& fit);
nlohmann::json to_json(const RunSummary& summary);

/// Seventeen significant digits, "nan"/"inf" for non-finite values.
std::string format_double(double x);

void write_timeseries_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records);
void write_final_state_csv(std::ostream& out, const State& state);

struct RunOutcome {
  Trajectory trajectory;
  RunSummary summary;
  std::optional<ConstantsLedger> ledger;
  std::string ledger_note;  // why there is no ledger
  InitialData initial;
  double A = 0.0;
};

/// Runs the scenario without touching the file system.
RunOutcome execute_scenario(const Scenario& scenario);

/// Writes timeseries.csv, summary.json and final_state.csv into out_dir (created if missing).
/// Returns 0 / 2 / 3 by run status. Throws ScenarioError(IoError).
int cmd_run(const Scenario& scenario, const std::string& out_dir, std::ostream& log);

/// Prints the ledger JSON to `out`; exit 4 with a message on `err` when alpha*b <= tau.
int cmd_constants(const Scenario& scenario, std::ostream& out, std::ostream& err);

struct SweepRow {
  Params params;
  bool stable = false;
  double oracle_max_re = 0.0;  // NaN for non-constant gamma
  double oracle_rate = 0.0;    // -2 * oracle_max_re
  double sim_rate = 0.0;       // NaN when no fit could be made
  double sim_goodness = 0.0;
  RunStatus status = RunStatus::Completed;
  bool agree = false;
};

inline constexpr const char* kSweepHeader =
    "tau,alpha,b,D,eps,routh_hurwitz_stable,oracle_max_re,oracle_rate,sim_rate,sim_goodness,status,agree";

/// One row per point, sorted lexicographically on (tau, alpha, b, D, eps).
std::vector<SweepRow> run_sweep(const SweepSpec& spec);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Writes sweep.csv into out_dir.
int cmd_sweep(const SweepSpec& spec, const std::string& out_dir, std::ostream& log);

inline constexpr const char* kOracleHeader = "k,mu_h,re1,im1,re2,im2,re3,im3,max_re";

struct OracleRequest {
  Params params;
  double gamma = 1.0;
  double length = 1.0;
  int k_max = 1;
  std::optional<int> cells;  // discrete mu_h when given, continuous (k pi / L)^2 otherwise
};

/// Prints the spectrum table for k = 1..k_max.
int cmd_oracle(const OracleRequest& request, std::ostream& out, std::ostream& err);

/// Scenario form: exit 5 for non-constant gamma.
int cmd_oracle(const Scenario& scenario, int k_max, bool discrete, std::ostream& out, std::ostream& err);

}  // namespace mgt
