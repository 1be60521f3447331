#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "mgt/constants.hpp"
#include "mgt/model.hpp"

namespace mgt {

// Everything measured at one save point. The first eighteen members are the
// timeseries.csv columns, in order.
struct DiagnosticsRecord {
  double t = 0.0;
  double seminorm_wx2 = 0.0;   // int w_x^2
  double seminorm_vxx2 = 0.0;  // int v_xx^2
  double seminorm_uxx2 = 0.0;  // int u_xx^2
  double energy_y = 0.0;       // NaN without a ledger
  double theta_min = 0.0;
  double theta_max = 0.0;
  double theta_mean = 0.0;
  double theta_x_linf = 0.0;
  double theta_xx_linf = 0.0;
  double theta_t_linf = 0.0;
  double mean_u = 0.0;
  double mean_v = 0.0;
  double mean_w = 0.0;
  double h_linf = 0.0;
  double h_x_l2 = 0.0;
  bool te_satisfied = false;
  bool two_sided_ok = false;

  // Not serialized.
  double seminorm_uxxx2 = 0.0;  // int u_xxx^2 (enters the two-sided sum with weight eps)
  double lower_margin = 0.0;    // y - k1 S
  double upper_margin = 0.0;    // k2 S - y
  bool gamma_in_band = false;   // gamma_star <= gamma(theta) <= gamma_upper at every node

  /// ||theta - mean(theta)||_inf.
  double theta_deviation() const;
};

inline constexpr std::array<std::string_view, 18> kRecordColumns = {
    "t",           "seminorm_wx2",  "seminorm_vxx2", "seminorm_uxx2", "energy_y", "theta_min",
    "theta_max",   "theta_mean",    "theta_x_linf",  "theta_xx_linf", "theta_t_linf", "mean_u",
    "mean_v",      "mean_w",        "h_linf",        "h_x_l2",        "te_satisfied", "two_sided_ok"};

struct RecordContext {
  const ConstantsLedger* ledger = nullptr;
  std::optional<double> eta_override;
  std::optional<double> theta_star;  // falls back to ledger->theta_star

  std::optional<double> eta() const;
  std::optional<double> star() const;
};

DiagnosticsRecord compute_record(const State& state, const Params& params, const GammaSpec& gamma,
                                 const RecordContext& ctx);

}  // namespace mgt
