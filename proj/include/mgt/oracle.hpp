#pragma once

#include <array>
#include <complex>

#include "mgt/gamma.hpp"
#include "mgt/grid.hpp"
#include "mgt/model.hpp"

namespace mgt {

// Linear theory for constant gamma: u = e^{lambda t} cos(k pi x / L) gives
// tau lambda^3 + alpha lambda^2 + b gamma mu lambda + gamma mu = 0.
struct ModeSpectrum {
  int k = 0;
  double mu = 0.0;
  std::array<std::complex<double>, 3> roots{};  // sorted by real part, descending
  double max_real_part = 0.0;
};

/// Companion-matrix roots of the cubic. eps in `params` is ignored.
/// Throws NonConstantGamma, InvalidSpec (mu <= 0) and NonFiniteResult (residual check).
ModeSpectrum char_roots(const Params& params, const GammaSpec& gamma, double mu, int k = 0);

struct ModeMatrix {
  std::array<std::array<double, 3>, 3> a{};  // rows for (u, v, w)
  std::array<std::complex<double>, 3> eigenvalues{};  // sorted by real part, descending
  double max_real_part = 0.0;
};

/// [-eps mu, 1, 0; 0, -eps mu, 1; -gamma mu/tau, -b gamma mu/tau, -(alpha + eps mu)/tau]. mu >= 0.
ModeMatrix regularized_mode_matrix(const Params& params, const GammaSpec& gamma, double mu);

/// alpha * (b gamma) > tau * gamma, i.e. alpha b > tau.
bool routh_hurwitz_stable(const Params& params, double gamma_const);

/// -2 * max real part of the mode matrix at the discrete mu_h of mode k (k = 0 gives 2 alpha / tau).
/// Positive for decay, negative for growth.
double predict_decay_rate(const Params& params, const GammaSpec& gamma, const Grid& grid, int k);

}  // namespace mgt
