#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mgt/constants.hpp"
#include "mgt/integrator.hpp"
#include "mgt/record.hpp"

namespace mgt {

/// The ten-term energy functional evaluated with the discrete operators.
/// Throws MissingLedger when `ledger` is null.
double energy_y(const State& state, const Params& params, const GammaSpec& gamma, const ConstantsLedger* ledger);

struct TwoSidedCheck {
  bool ok = false;            // both margins >= -1e-10 * scale
  double y = 0.0;
  double S = 0.0;             // int w_x^2 + int v_xx^2 + int u_xx^2 + eps int u_xxx^2
  double lower_margin = 0.0;  // y - k1 S
  double upper_margin = 0.0;  // k2 S - y
  bool gamma_in_band = false; // precondition gamma_star <= gamma(theta) <= gamma_upper
};

TwoSidedCheck check_two_sided(const State& state, const Params& params, const GammaSpec& gamma,
                              const ConstantsLedger& ledger);

struct LyapunovReport {
  bool ok = true;                   // no violation over all saved pairs
  std::size_t pairs = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;         // max of y(t_{n+1}) / (y(t_n) e^{-kappa dt_n}) over pairs with y(t_n) > 0
  std::optional<double> first_violation;
  double te_window_end = 0.0;       // last save before the first (te) violation
  bool ok_in_te_window = true;
  double tolerance = 0.0;
};

/// y(t_{n+1}) <= y(t_n) exp(-kappa (t_{n+1} - t_n)) (1 + 1e-6 + 10 dt^4) for consecutive saves.
LyapunovReport check_lyapunov(const Trajectory& trajectory, const ConstantsLedger& ledger);

struct SelfMapReport {
  double eta = 0.0;
  double theta_bound = 0.0;  // 2 theta_star
  double T_eps = 0.0;        // first violating save time, or the final time
  bool loop_closes = false;  // no violation anywhere
  std::optional<std::size_t> first_violation_index;
};

/// Throws MissingLedger when neither a ledger nor (eta_override and theta_star) are available.
SelfMapReport check_selfmap(const Trajectory& trajectory, const ConstantsLedger* ledger,
                            std::optional<double> eta_override, std::optional<double> theta_star = std::nullopt);

struct HDiagnostics {
  double h_linf = 0.0;
  double h_x_l2 = 0.0;
};

HDiagnostics h_diagnostics(const State& state, const Params& params, const GammaSpec& gamma);

struct DecayFit {
  double rate = 0.0;
  double amplitude = 0.0;
  double goodness = 0.0;  // squared correlation of the log-linear fit, in [0, 1]
  std::size_t samples = 0;
  bool oscillatory = false;  // fitted through refined peak maxima
};

/// Log-linear least squares of `values` against `times` over [t_lo, t_hi]. Series whose
/// log-derivative changes sign more than three times are fitted through their local maxima.
/// Throws InsufficientData (fewer than 10 samples in the window, or fewer than 2 peaks) and
/// NonPositiveSeries (negative or non-finite values; zeros are floored at 1e-300).
DecayFit fit_decay(std::span<const double> times, std::span<const double> values, double t_lo, double t_hi);

struct ThetaInfty {
  double theta_infty = 0.0;
  double correction = 0.0;
  std::optional<double> tail_rate;  // fitted decay rate of ||theta - mean(theta)||_inf
  std::optional<double> tail_goodness;
};

/// Mean-temperature series version. Throws NonMonotoneMean.
ThetaInfty estimate_theta_infty(std::span<const double> times, std::span<const double> means);

ThetaInfty estimate_theta_infty(const Trajectory& trajectory);

// Column extraction.
std::vector<double> series_t(const Trajectory& trajectory);
std::vector<double> series_seminorm_sum(const Trajectory& trajectory);  // wx2 + vxx2 + uxx2
std::vector<double> series_theta_deviation(const Trajectory& trajectory);

struct RunSummary {
  std::optional<DecayFit> fit_wx2;
  std::optional<DecayFit> fit_vxx2;
  std::optional<DecayFit> fit_uxx2;
  std::optional<DecayFit> fit_y;
  std::optional<DecayFit> fit_theta_dev;
  std::optional<DecayFit> fit_theta_x;
  std::optional<DecayFit> fit_h;
  std::optional<ThetaInfty> theta_infty;
  std::optional<double> kappa_theoretical;
  std::optional<double> kappa0_theoretical;
  std::optional<double> kappa_fitted;  // rate of the y series, else of the seminorm sum
  std::optional<double> first_te_violation;
  std::optional<LyapunovReport> lyapunov;
  std::optional<SelfMapReport> selfmap;
  bool two_sided_all = false;
  bool means_conserved = false;  // |means| <= 1e-11 (1 + max seminorm) at every save
  bool theta_mean_nondecreasing = false;
  bool theta_nonnegative = false;
  // Empirical ledger slots.
  std::optional<double> k4;
  std::optional<double> k6;
};

struct SummaryOptions {
  const ConstantsLedger* ledger = nullptr;
  std::optional<double> eta_override;
  std::optional<double> theta_star;
  double A = 0.0;  // compute_A of the initial state
  bool enable_lyapunov = true;
  bool enable_selfmap = true;
};

/// Fits over the second half of the run. Fits that cannot be made are left empty.
RunSummary summarize(const Trajectory& trajectory, const SummaryOptions& options);

}  // namespace mgt
