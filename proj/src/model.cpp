#include "mgt/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mgt {

void Params::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) throw Error(Errc::InvalidSpec, std::string(name) + " must be positive");
  };
  positive(tau, "tau");
  positive(alpha, "alpha");
  positive(b, "b");
  positive(D, "D");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw Error(Errc::InvalidSpec, "eps must be nonnegative");
}

State::State(const Grid& grid, double time) : t(time), u(grid), v(grid), w(grid), theta(grid) {}

void State::validate() const {
  const Grid& g = u.grid();
  if (!(v.grid() == g) || !(w.grid() == g) || !(theta.grid() == g)) {
    throw Error(Errc::NonFiniteState, "state fields live on different grids");
  }
  if (u.size() != g.nodes() || v.size() != g.nodes() || w.size() != g.nodes() || theta.size() != g.nodes()) {
    throw Error(Errc::NonFiniteState, "state field length does not match its grid");
  }
  if (!std::isfinite(t) || !all_finite(u.values()) || !all_finite(v.values()) || !all_finite(w.values()) ||
      !all_finite(theta.values())) {
    throw Error(Errc::NonFiniteState, "state contains a non-finite value");
  }
}

void InitSpec::validate() const {
  if (!(theta_base >= 0.0) || !std::isfinite(theta_base)) throw Error(Errc::InvalidSpec, "theta_base must be >= 0");
  if (theta_mode.k < 1) throw Error(Errc::InvalidSpec, "theta mode index must be >= 1");
  if (!(std::abs(theta_mode.amplitude) <= theta_base)) {
    throw Error(Errc::InvalidSpec, "theta perturbation amplitude exceeds theta_base (theta0 would go negative)");
  }
  for (const auto* modes : {&u_modes, &v_modes, &w_modes}) {
    for (double a : *modes) {
      if (!std::isfinite(a)) throw Error(Errc::InvalidSpec, "mode amplitudes must be finite");
    }
  }
  if (!std::isfinite(u_mean) || !std::isfinite(v_mean) || !std::isfinite(w_mean)) {
    throw Error(Errc::InvalidSpec, "mean offsets must be finite");
  }
}

namespace {

Field cosine_sum(const Grid& grid, const std::vector<double>& amplitudes, double offset) {
  const double L = grid.length();
  return sample(grid, [&](double x) {
    double s = offset;
    for (std::size_t j = 0; j < amplitudes.size(); ++j) {
      if (amplitudes[j] != 0.0) s += amplitudes[j] * std::cos(static_cast<double>(j + 1) * std::numbers::pi * x / L);
    }
    return s;
  });
}

double integral_of_square(const Field& f) {
  const double h = f.grid().spacing();
  std::vector<double> sq(f.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = f[i] * f[i];
  return kernels::quad_trapz(sq, h);
}

void require_positive_gamma(std::span<const double> coef) {
  for (double c : coef) {
    if (!(c > 0.0)) throw Error(Errc::NonPositiveGamma, "gamma(theta) is not positive at a node");
  }
}

}  // namespace

InitialData make_initial_data(const InitSpec& spec, const Grid& grid) {
  spec.validate();
  InitialData out;
  State& s = out.state;
  s.t = 0.0;
  s.u = cosine_sum(grid, spec.u_modes, spec.u_mean);
  s.v = cosine_sum(grid, spec.v_modes, spec.v_mean);
  s.w = cosine_sum(grid, spec.w_modes, spec.w_mean);
  const double L = grid.length();
  const int k = spec.theta_mode.k;
  const double d = spec.theta_mode.amplitude;
  s.theta = sample(grid, [&](double x) {
    // Clamp the roundoff-negative minimum of theta_base + theta_base*cos(.) to zero.
    return std::max(0.0, spec.theta_base + d * std::cos(k * std::numbers::pi * x / L));
  });

  out.mechanical_smallness =
      integral_of_square(d2_neumann(s.u)) + integral_of_square(d2_neumann(s.v)) + integral_of_square(d1_central(s.w));
  out.thermal_smallness = norm_linf(d1_central(s.theta)) + norm_linf(d2_neumann(s.theta));
  return out;
}

RhsEvaluator::RhsEvaluator(const Grid& grid, const Params& params, const GammaSpec& gamma)
    : grid_(grid),
      params_(params),
      gamma_(gamma),
      coef_(grid.nodes()),
      combo_(grid.nodes()),
      scratch_(grid.nodes()) {}

void RhsEvaluator::operator()(const std::vector<double>& u, const std::vector<double>& v,
                              const std::vector<double>& w, const std::vector<double>& theta,
                              std::vector<double>& du, std::vector<double>& dv, std::vector<double>& dw,
                              std::vector<double>& dtheta) {
  const std::size_t n = u.size();
  const double h = grid_.spacing();
  const double eps = params_.eps;
  const double inv_tau = 1.0 / params_.tau;

  gamma_values(gamma_, theta, coef_);

  if (eps > 0.0) {
    kernels::d2_neumann(u, h, du);
    kernels::d2_neumann(v, h, dv);
    kernels::d2_neumann(w, h, dw);
    for (std::size_t i = 0; i < n; ++i) {
      du[i] = eps * du[i] + v[i];
      dv[i] = eps * dv[i] + w[i];
      dw[i] = eps * dw[i] - params_.alpha * w[i];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      du[i] = v[i];
      dv[i] = w[i];
      dw[i] = -params_.alpha * w[i];
    }
  }
  // b (gamma v_x)_x + (gamma u_x)_x share the face coefficients, so one flux of b v + u.
  for (std::size_t i = 0; i < n; ++i) combo_[i] = params_.b * v[i] + u[i];
  kernels::add_div_flux(coef_, combo_, h, 1.0, dw);
  for (std::size_t i = 0; i < n; ++i) dw[i] *= inv_tau;

  kernels::d2_neumann(theta, h, dtheta);
  kernels::d1_central(v, h, scratch_);
  for (std::size_t i = 0; i < n; ++i) {
    dtheta[i] = params_.D * dtheta[i] + params_.b * coef_[i] * scratch_[i] * scratch_[i];
  }
}

StateDerivative rhs(const State& state, const Params& params, const GammaSpec& gamma) {
  state.validate();
  const Grid& grid = state.grid();
  std::vector<double> coef(grid.nodes());
  gamma_values(gamma, state.theta.values(), coef);
  require_positive_gamma(coef);

  std::vector<double> u(state.u.values().begin(), state.u.values().end());
  std::vector<double> v(state.v.values().begin(), state.v.values().end());
  std::vector<double> w(state.w.values().begin(), state.w.values().end());
  std::vector<double> th(state.theta.values().begin(), state.theta.values().end());
  std::vector<double> du(grid.nodes()), dv(grid.nodes()), dw(grid.nodes()), dth(grid.nodes());
  RhsEvaluator eval(grid, params, gamma);
  eval(u, v, w, th, du, dv, dw, dth);
  return {Field(grid, std::move(du)), Field(grid, std::move(dv)), Field(grid, std::move(dw)),
          Field(grid, std::move(dth))};
}

Field source_h(const State& state, const Params& params, const GammaSpec& gamma) {
  state.validate();
  const Grid& grid = state.grid();
  std::vector<double> coef(grid.nodes());
  gamma_values(gamma, state.theta.values(), coef);
  std::vector<double> vx(grid.nodes());
  kernels::d1_central(state.v.values(), grid.spacing(), vx);
  for (std::size_t i = 0; i < vx.size(); ++i) vx[i] = params.b * coef[i] * vx[i] * vx[i];
  return Field(grid, std::move(vx));
}

Field theta_time_derivative(const State& state, const Params& params, const GammaSpec& gamma) {
  Field h = source_h(state, params, gamma);
  std::vector<double> out(state.grid().nodes());
  kernels::d2_neumann(state.theta.values(), state.grid().spacing(), out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = params.D * out[i] + h[i];
  return Field(state.grid(), std::move(out));
}

}  // namespace mgt
