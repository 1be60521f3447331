#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mgt/record.hpp"

namespace mgt {

struct TimeControl {
  double t_end = 1.0;
  double cfl_factor = 0.4;  // in (0, 1]
  int save_stride = 10;
  double blowup_threshold = 1e8;

  void validate() const;
};

enum class RunStatus { Completed, BlowUp, NumericalFailure };

std::string_view status_name(RunStatus status);

struct Trajectory {
  std::vector<DiagnosticsRecord> records;
  State final_state;
  RunStatus status = RunStatus::Completed;
  std::string failure_reason;
  std::optional<double> blowup_time;
  std::optional<double> first_te_violation;
  double dt_initial = 0.0;
  double dt_final = 0.0;
  std::size_t steps = 0;
  bool unregularized = false;
};

/// Largest stable step: min(h^2 tau/(4 b gamma_max), h^2/(4 D), h^2/(4 eps), sqrt(tau/gamma_max) h/2)
/// with gamma_max taken over [theta_lo, theta_hi]. Throws DegenerateRange on a bad interval.
double cfl_dt_max(const Grid& grid, const Params& params, const GammaSpec& gamma, double theta_lo, double theta_hi);

/// cfl_factor * cfl_dt_max(...).
double cfl_dt(const Grid& grid, const Params& params, const GammaSpec& gamma, double theta_lo, double theta_hi,
              double cfl_factor = 0.4);

/// One classical RK4 step. Throws NonFiniteResult if the result is not finite.
State rk4_step(const State& state, double dt, const Params& params, const GammaSpec& gamma);

struct RunOptions {
  const ConstantsLedger* ledger = nullptr;
  std::optional<double> eta_override;
  std::optional<double> theta_star;
};

/// Fixed-step RK4 from `init` to control.t_end. Failures are reported through the
/// trajectory status, never thrown (invalid inputs still throw).
Trajectory run_simulation(const State& init, const Params& params, const GammaSpec& gamma,
                          const TimeControl& control, const RunOptions& options = {});

}  // namespace mgt
