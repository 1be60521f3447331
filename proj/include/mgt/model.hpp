#pragma once

#include <vector>

#include "mgt/gamma.hpp"
#include "mgt/grid.hpp"

namespace mgt {

// Coefficients of the regularized thermoacoustic system.
struct Params {
  double tau = 1.0;    // relaxation time
  double alpha = 1.0;  // damping
  double b = 1.0;      // viscosity-to-stiffness ratio
  double D = 1.0;      // heat diffusivity
  double eps = 0.0;    // artificial diffusion in the mechanical equations

  /// alpha * b > tau.
  bool dissipation_dominated() const { return alpha * b > tau; }
  bool unregularized() const { return eps == 0.0; }

  /// Throws InvalidSpec unless tau, alpha, b, D > 0 and eps >= 0.
  void validate() const;
};

// u, v = u_t, w = u_tt and temperature theta at one instant.
struct State {
  double t = 0.0;
  Field u;
  Field v;
  Field w;
  Field theta;

  State() = default;
  explicit State(const Grid& grid, double time = 0.0);

  const Grid& grid() const { return u.grid(); }

  /// Throws NonFiniteState on NaN/Inf or mismatched grids.
  void validate() const;
};

// Time derivatives of the four fields.
struct StateDerivative {
  Field u;
  Field v;
  Field w;
  Field theta;
};

struct CosineMode {
  int k = 1;
  double amplitude = 0.0;
};

// Initial data built from Neumann-compatible cosine modes (k >= 1, zero mean).
struct InitSpec {
  std::vector<double> u_modes;  // amplitude of cos(k pi x / L), k = 1..size
  std::vector<double> v_modes;
  std::vector<double> w_modes;
  double theta_base = 1.0;
  CosineMode theta_mode{1, 0.0};

  // Adds a constant to u, v, w. Nonzero offsets break the zero-mean requirement on
  // purpose (mean-shift experiments).
  double u_mean = 0.0;
  double v_mean = 0.0;
  double w_mean = 0.0;

  /// Throws InvalidSpec if theta_base < 0, |amplitude| > theta_base, or k < 1.
  void validate() const;
};

struct InitialData {
  State state;
  // int u0_xx^2 + int v0_xx^2 + int w0_x^2
  double mechanical_smallness = 0.0;
  // ||theta0_x||_inf + ||theta0_xx||_inf
  double thermal_smallness = 0.0;
};

InitialData make_initial_data(const InitSpec& spec, const Grid& grid);

/// Semi-discrete right-hand side. Throws NonFiniteState or NonPositiveGamma.
StateDerivative rhs(const State& state, const Params& params, const GammaSpec& gamma);

/// Heat source b * gamma(theta) * v_x^2 (nonnegative, zero at the boundary nodes).
Field source_h(const State& state, const Params& params, const GammaSpec& gamma);

/// D theta_xx + source_h.
Field theta_time_derivative(const State& state, const Params& params, const GammaSpec& gamma);

// Preallocated evaluator for the integrator hot path. No validation beyond what the
// integrator does per step.
class RhsEvaluator {
 public:
  RhsEvaluator(const Grid& grid, const Params& params, const GammaSpec& gamma);

  void operator()(const std::vector<double>& u, const std::vector<double>& v, const std::vector<double>& w,
                  const std::vector<double>& theta, std::vector<double>& du, std::vector<double>& dv,
                  std::vector<double>& dw, std::vector<double>& dtheta);

 private:
  Grid grid_;
  Params params_;
  GammaSpec gamma_;
  std::vector<double> coef_;
  std::vector<double> combo_;
  std::vector<double> scratch_;
};

}  // namespace mgt
