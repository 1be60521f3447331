#include "mgt/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mgt {

void TimeControl::validate() const {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw Error(Errc::InvalidSpec, "t_end must be positive");
  if (!(cfl_factor > 0.0 && cfl_factor <= 1.0)) throw Error(Errc::InvalidSpec, "cfl_factor must lie in (0, 1]");
  if (save_stride < 1) throw Error(Errc::InvalidSpec, "save_stride must be a positive integer");
  if (!(blowup_threshold > 0.0) || !std::isfinite(blowup_threshold)) {
    throw Error(Errc::InvalidSpec, "blowup_threshold must be positive");
  }
}

std::string_view status_name(RunStatus status) {
  switch (status) {
    case RunStatus::Completed: return "Completed";
    case RunStatus::BlowUp: return "BlowUp";
    case RunStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

double cfl_dt_max(const Grid& grid, const Params& params, const GammaSpec& gamma, double theta_lo, double theta_hi) {
  if (!std::isfinite(theta_lo) || !std::isfinite(theta_hi) || theta_lo < 0.0 || theta_hi < theta_lo) {
    throw Error(Errc::DegenerateRange, "theta range must be a finite subinterval of [0, inf)");
  }
  params.validate();
  const double g_max = gamma.is_constant() ? gamma.a : gamma_bounds(gamma, theta_lo, theta_hi, 1000).max_value;
  if (!(g_max > 0.0)) throw Error(Errc::NonPositiveGamma, "gamma is not positive on the theta range");
  const double h = grid.spacing();
  double dt = std::min(h * h * params.tau / (4.0 * params.b * g_max), h * h / (4.0 * params.D));
  if (params.eps > 0.0) dt = std::min(dt, h * h / (4.0 * params.eps));
  dt = std::min(dt, std::sqrt(params.tau / g_max) * h / 2.0);
  return dt;
}

double cfl_dt(const Grid& grid, const Params& params, const GammaSpec& gamma, double theta_lo, double theta_hi,
              double cfl_factor) {
  if (!(cfl_factor > 0.0 && cfl_factor <= 1.0)) throw Error(Errc::InvalidSpec, "cfl_factor must lie in (0, 1]");
  return cfl_factor * cfl_dt_max(grid, params, gamma, theta_lo, theta_hi);
}

namespace {

using Vec = std::vector<double>;

// Classical RK4 on the four nodal vectors with all stage storage allocated once.
class Rk4 {
 public:
  Rk4(const Grid& grid, const Params& params, const GammaSpec& gamma) : eval_(grid, params, gamma) {
    const std::size_t n = grid.nodes();
    for (auto* set : {&k1_, &k2_, &k3_, &k4_, &tmp_}) {
      for (auto& v : *set) v.assign(n, 0.0);
    }
  }

  void step(std::array<Vec, 4>& y, double dt) {
    const std::size_t n = y[0].size();
    eval(y, k1_);
    axpy(y, 0.5 * dt, k1_);
    eval(tmp_, k2_);
    axpy(y, 0.5 * dt, k2_);
    eval(tmp_, k3_);
    axpy(y, dt, k3_);
    eval(tmp_, k4_);
    const double c = dt / 6.0;
    for (int f = 0; f < 4; ++f) {
      Vec& yf = y[f];
      for (std::size_t i = 0; i < n; ++i) {
        yf[i] += c * (k1_[f][i] + 2.0 * k2_[f][i] + 2.0 * k3_[f][i] + k4_[f][i]);
      }
    }
  }

 private:
  void eval(const std::array<Vec, 4>& y, std::array<Vec, 4>& k) { eval_(y[0], y[1], y[2], y[3], k[0], k[1], k[2], k[3]); }

  void axpy(const std::array<Vec, 4>& y, double a, const std::array<Vec, 4>& k) {
    for (int f = 0; f < 4; ++f) {
      for (std::size_t i = 0; i < y[f].size(); ++i) tmp_[f][i] = y[f][i] + a * k[f][i];
    }
  }

  RhsEvaluator eval_;
  std::array<Vec, 4> k1_, k2_, k3_, k4_, tmp_;
};

std::array<Vec, 4> unpack(const State& s) {
  auto c = [](const Field& f) { return Vec(f.values().begin(), f.values().end()); };
  return {c(s.u), c(s.v), c(s.w), c(s.theta)};
}

State pack(const Grid& g, const std::array<Vec, 4>& y, double t) {
  State s;
  s.t = t;
  s.u = Field(g, y[0]);
  s.v = Field(g, y[1]);
  s.w = Field(g, y[2]);
  s.theta = Field(g, y[3]);
  return s;
}

double w12_norm(const Vec& f, double h) {
  Vec fx(f.size()), sq(f.size());
  kernels::d1_central(f, h, fx);
  for (std::size_t i = 0; i < f.size(); ++i) sq[i] = f[i] * f[i] + fx[i] * fx[i];
  return std::sqrt(kernels::quad_trapz(sq, h));
}

}  // namespace

State rk4_step(const State& state, double dt, const Params& params, const GammaSpec& gamma) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(Errc::InvalidSpec, "dt must be positive");
  state.validate();
  params.validate();
  Rk4 rk(state.grid(), params, gamma);
  auto y = unpack(state);
  rk.step(y, dt);
  for (const auto& f : y) {
    if (!all_finite(f)) throw Error(Errc::NonFiniteResult, "RK4 step produced a non-finite value");
  }
  return pack(state.grid(), y, state.t + dt);
}

Trajectory run_simulation(const State& init, const Params& params, const GammaSpec& gamma,
                          const TimeControl& control, const RunOptions& options) {
  init.validate();
  params.validate();
  control.validate();
  const Grid grid = init.grid();
  const double h = grid.spacing();
  const RecordContext ctx{options.ledger, options.eta_override, options.theta_star};
  const bool monitor_te = ctx.eta().has_value() && ctx.star().has_value();

  Trajectory tr;
  tr.unregularized = params.unregularized();

  auto y = unpack(init);
  auto theta_range = [&]() {
    const auto [lo, hi] = std::minmax_element(y[3].begin(), y[3].end());
    return std::pair{std::max(0.0, *lo), std::max(0.0, *hi)};
  };
  auto [ref_lo, ref_hi] = theta_range();
  double dt = cfl_dt(grid, params, gamma, ref_lo, ref_hi, control.cfl_factor);
  tr.dt_initial = dt;
  double t = init.t;

  auto fail = [&](RunStatus status, std::string reason) {
    tr.status = status;
    tr.failure_reason = std::move(reason);
  };

  // Returns false when the run must stop.
  auto save = [&]() -> bool {
    const State s = pack(grid, y, t);
    DiagnosticsRecord r;
    try {
      r = compute_record(s, params, gamma, ctx);
    } catch (const Error& e) {
      fail(RunStatus::NumericalFailure, e.what());
      return false;
    }
    tr.records.push_back(r);
    if (monitor_te && !r.te_satisfied && !tr.first_te_violation) tr.first_te_violation = t;

    const double norms[] = {kernels::norm_linf(y[2]), w12_norm(y[1], h), w12_norm(y[0], h), kernels::norm_linf(y[3])};
    for (double nrm : norms) {
      if (!(nrm <= control.blowup_threshold)) {
        tr.blowup_time = t;
        fail(RunStatus::BlowUp, "monitored norm exceeded the blow-up threshold");
        return false;
      }
    }
    if (r.theta_min < -1e-12 * std::max(1.0, r.theta_max)) {
      fail(RunStatus::NumericalFailure, "temperature went negative beyond roundoff");
      return false;
    }
    return true;
  };

  Rk4 rk(grid, params, gamma);
  bool running = save();
  const double t_end = control.t_end;
  while (running && t < t_end) {
    const double remaining = t_end - t;
    const bool last = remaining <= dt * (1.0 + 1e-10);
    rk.step(y, last ? remaining : dt);
    t = last ? t_end : t + dt;
    ++tr.steps;

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    bool finite = true;
    for (int f = 0; f < 4 && finite; ++f) {
      for (double x : y[f]) {
        if (!std::isfinite(x)) {
          finite = false;
          break;
        }
      }
    }
    if (!finite) {
      fail(RunStatus::NumericalFailure, "non-finite value after step " + std::to_string(tr.steps));
      break;
    }
    if (!gamma.is_constant()) {
      for (double x : y[3]) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      lo = std::max(0.0, lo);
      const double width = std::max(ref_hi - ref_lo, 1e-12 * std::max(1.0, ref_hi));
      if (hi > ref_hi + 0.25 * width || lo < ref_lo - 0.25 * width) {
        ref_lo = std::min(ref_lo, lo);
        ref_hi = std::max(ref_hi, hi);
        dt = std::min(dt, cfl_dt(grid, params, gamma, ref_lo, ref_hi, control.cfl_factor));
      }
    }

    if (last || tr.steps % static_cast<std::size_t>(control.save_stride) == 0) running = save();
  }

  tr.dt_final = dt;
  tr.final_state = pack(grid, y, t);
  return tr;
}

}  // namespace mgt
