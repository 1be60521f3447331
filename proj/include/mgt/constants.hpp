#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mgt/gamma.hpp"
#include "mgt/model.hpp"

namespace mgt {

// Free parameters of the energy functional: 1/b < B < alpha/tau, 1/b1 < B, B^2/B1 < alpha/tau,
// b1 < b, B1 < B.
struct Frame {
  double B;
  double b1;
  double B1;
};

/// Midpoint selections inside each admissible interval. Throws NotDissipationDominated
/// when alpha*b <= tau.
Frame choose_frame(const Params& params);

// The full constant chain for the Lyapunov functional, its two-sided bound and the
// decay rate. Field names match the JSON keys.
struct ConstantsLedger {
  double theta_star = 0.0;
  double length = 0.0;

  double gamma_star = 0.0;   // half the inf of gamma over [0, 2 theta_star]
  double gamma_upper = 0.0;  // twice the sup of gamma over [0, 2 theta_star]
  double Gamma_star = 0.0;   // 1 + sup |gamma'|
  double gpp_bound = 0.0;    // 1 + sup |gamma''|

  double B = 0.0;
  double b1 = 0.0;
  double B1 = 0.0;

  double c2_550 = 0.0;  // (tau/2)(1 - tau B^2 / (alpha B1))
  double c2_66 = 0.0;   // alpha - tau B
  double c3_66 = 0.0;   // (b B - 1) gamma_star

  double poincare_c1 = 0.0;
  double poincare_c4 = 0.0;
  double embed_c1 = 0.0;

  double delta1 = 0.0;
  double delta = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double eta = 0.0;
  double kappa = 0.0;

  double c5 = 0.0;
  double c6 = 0.0;
  double c7 = 0.0;
  double c8 = 0.0;

  double lambda_D = 0.0;
  double kappa0 = 0.0;

  // Fitted from trajectories, never derived.
  std::optional<double> k4;
  std::optional<double> k5;
  std::optional<double> k6;
  std::optional<double> nu;
};

/// Evaluates the chain in dependency order and re-verifies every stored inequality.
/// Throws NotDissipationDominated, GammaNotPositive or InvalidSpec.
ConstantsLedger compute_ledger(const Params& params, const GammaSpec& gamma, double theta_star, double length);

// Individual bounds, exposed for tests and the verification pass.
struct DeltaBounds {
  double from_551;  // tau delta <= alpha (B - B1) / 2
  double from_552;  // quadratic Poincare absorption
};
DeltaBounds delta1_bounds(const Params& params, const Frame& frame, double gamma_star, double poincare_c1);

std::array<double, 4> k1_arguments(const Params& params, const Frame& frame, double c2_550, double gamma_star);
std::array<double, 4> k2_arguments(const Params& params, const Frame& frame, double c2_550, double gamma_star,
                                   double gamma_upper, double poincare_c1, double delta);
std::array<double, 4> delta_arguments(const Params& params, double delta1, double c3, double c4, double gamma_star);
std::array<double, 4> kappa_arguments(const Params& params, const Frame& frame, double c2, double c3, double delta,
                                      double gamma_star, double k2);
// Largest eta allowed by each of the four smallness inequalities.
std::array<double, 4> eta_bounds(const ConstantsLedger& ledger, const Params& params);

/// Returns a list of violated invariants (empty when the ledger is consistent).
std::vector<std::string> verify_ledger(const ConstantsLedger& ledger, const Params& params);

/// int w0_x^2 + int v0_xx^2 + int u0_xx^2 + eps int u0_xxx^2.
double compute_A(const State& state0, double eps);

}  // namespace mgt
