#include "mgt/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace mgt {

namespace {

void require_constant(const GammaSpec& gamma) {
  if (!gamma.is_constant()) throw Error(Errc::NonConstantGamma, "the linear oracle needs a constant gamma");
  if (!(gamma.a > 0.0)) throw Error(Errc::NonPositiveGamma, "gamma must be positive");
}

std::array<std::complex<double>, 3> sorted_eigenvalues(const Eigen::Matrix3d& m) {
  Eigen::EigenSolver<Eigen::Matrix3d> es(m, false);
  std::array<std::complex<double>, 3> ev;
  for (int i = 0; i < 3; ++i) ev[i] = es.eigenvalues()[i];
  std::sort(ev.begin(), ev.end(), [](auto x, auto y) {
    return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
  });
  return ev;
}

}  // namespace

ModeSpectrum char_roots(const Params& params, const GammaSpec& gamma, double mu, int k) {
  require_constant(gamma);
  params.validate();
  if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(Errc::InvalidSpec, "mu must be positive");
  const double g = gamma.a;
  const double c3 = params.tau, c2 = params.alpha, c1 = params.b * g * mu, c0 = g * mu;

  // Monic companion matrix of lambda^3 + (c2/c3) lambda^2 + (c1/c3) lambda + c0/c3.
  Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
  comp(0, 0) = -c2 / c3;
  comp(0, 1) = -c1 / c3;
  comp(0, 2) = -c0 / c3;
  comp(1, 0) = 1.0;
  comp(2, 1) = 1.0;

  ModeSpectrum s;
  s.k = k;
  s.mu = mu;
  s.roots = sorted_eigenvalues(comp);
  s.max_real_part = s.roots[0].real();

  const double cmax = std::max({std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
  for (const auto& l : s.roots) {
    const std::complex<double> p = ((c3 * l + c2) * l + c1) * l + c0;
    // Scale by |lambda|^3 as well so large roots are judged relative to their own size.
    const double scale = cmax * std::max(1.0, std::pow(std::abs(l), 3));
    if (!(std::abs(p) <= 1e-9 * scale)) {
      throw Error(Errc::NonFiniteResult, "characteristic root failed its residual check");
    }
  }
  return s;
}

ModeMatrix regularized_mode_matrix(const Params& params, const GammaSpec& gamma, double mu) {
  require_constant(gamma);
  params.validate();
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw Error(Errc::InvalidSpec, "mu must be nonnegative");
  const double g = gamma.a, e = params.eps, tau = params.tau;
  ModeMatrix m;
  m.a = {{{-e * mu, 1.0, 0.0},
          {0.0, -e * mu, 1.0},
          {-g * mu / tau, -params.b * g * mu / tau, -(params.alpha + e * mu) / tau}}};
  Eigen::Matrix3d em;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) em(i, j) = m.a[i][j];
  m.eigenvalues = sorted_eigenvalues(em);
  m.max_real_part = m.eigenvalues[0].real();
  return m;
}

bool routh_hurwitz_stable(const Params& params, double gamma_const) {
  return params.alpha * (params.b * gamma_const) > params.tau * gamma_const;
}

double predict_decay_rate(const Params& params, const GammaSpec& gamma, const Grid& grid, int k) {
  require_constant(gamma);
  if (k < 0) throw Error(Errc::InvalidSpec, "mode index must be >= 0");
  // The mean mode: eigenvalues 0, 0, -alpha/tau; only the w mean moves.
  if (k == 0) return 2.0 * params.alpha / params.tau;
  const double mu_h = discrete_mode_eigenvalue(grid, k);
  return -2.0 * regularized_mode_matrix(params, gamma, mu_h).max_real_part;
}

}  // namespace mgt
