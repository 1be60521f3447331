#include "mgt/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <thread>
#include <tuple>

#include "mgt/oracle.hpp"

namespace mgt {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <class T>
json opt(const std::optional<T>& x) {
  return x ? json(*x) : json(nullptr);
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ScenarioError(Errc::IoError, "", "cannot write '" + p.string() + "'", 0);
  return f;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ScenarioError(Errc::IoError, "", "cannot create directory '" + dir + "'", 0);
}

json gamma_json(const GammaSpec& g) {
  json p;
  switch (g.family) {
    case GammaFamily::Constant: p = {{"value", g.a}}; break;
    case GammaFamily::ExpDecay: p = {{"a", g.a}, {"b", g.b}, {"c", g.c}}; break;
    case GammaFamily::Rational: p = {{"a", g.a}, {"b", g.b}}; break;
    case GammaFamily::GaussianBump: p = {{"a", g.a}, {"b", g.b}, {"m", g.m}, {"s", g.s}}; break;
  }
  return {{"family", std::string(family_name(g.family))}, {"params", p}};
}

}  // namespace

int exit_code(RunStatus status) {
  switch (status) {
    case RunStatus::Completed: return kExitOk;
    case RunStatus::BlowUp: return kExitBlowUp;
    case RunStatus::NumericalFailure: return kExitNumericalFailure;
  }
  return kExitNumericalFailure;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json to_json(const ConstantsLedger& l) {
  return {
      {"theta_star", l.theta_star},   {"gamma_star", l.gamma_star},   {"gamma_upper", l.gamma_upper},
      {"Gamma_star", l.Gamma_star},   {"gpp_bound", l.gpp_bound},     {"B", l.B},
      {"b1", l.b1},                   {"B1", l.B1},                   {"c2_550", l.c2_550},
      {"c2_66", l.c2_66},             {"c3_66", l.c3_66},             {"poincare_c1", l.poincare_c1},
      {"poincare_c4", l.poincare_c4}, {"embed_c1", l.embed_c1},       {"delta1", l.delta1},
      {"delta", l.delta},             {"k1", l.k1},                   {"k2", l.k2},
      {"k3", l.k3},                   {"eta", l.eta},                 {"kappa", l.kappa},
      {"c5", l.c5},                   {"c6", l.c6},                   {"c7", l.c7},
      {"c8", l.c8},                   {"lambda_D", l.lambda_D},       {"kappa0", l.kappa0},
      {"k4", opt(l.k4)},              {"k5", opt(l.k5)},              {"k6", opt(l.k6)},
      {"nu", opt(l.nu)},
  };
}

json to_json(const Scenario& s) {
  json init = {
      {"u_modes", s.init.u_modes},
      {"v_modes", s.init.v_modes},
      {"w_modes", s.init.w_modes},
      {"theta_base", s.init.theta_base},
      {"theta_mode", {{"k", s.init.theta_mode.k}, {"amplitude", s.init.theta_mode.amplitude}}},
      {"u_mean", s.init.u_mean},
      {"v_mean", s.init.v_mean},
      {"w_mean", s.init.w_mean},
  };
  json checks = {{"enable_selfmap", s.checks.enable_selfmap}, {"enable_lyapunov", s.checks.enable_lyapunov}};
  if (s.checks.eta_override) checks["eta_override"] = *s.checks.eta_override;
  return {
      {"grid", {{"L", s.length}, {"N", s.cells}}},
      {"params",
       {{"tau", s.params.tau}, {"alpha", s.params.alpha}, {"b", s.params.b}, {"D", s.params.D}, {"eps", s.params.eps}}},
      {"gamma", gamma_json(s.gamma)},
      {"theta_star", s.theta_star},
      {"init", init},
      {"time",
       {{"t_end", s.time.t_end},
        {"cfl_factor", s.time.cfl_factor},
        {"save_stride", s.time.save_stride},
        {"blowup_threshold", s.time.blowup_threshold}}},
      {"checks", checks},
  };
}

json to_json(const DecayFit& f) {
  return {{"rate", num(f.rate)},
          {"amplitude", num(f.amplitude)},
          {"goodness", num(f.goodness)},
          {"samples", f.samples},
          {"oscillatory", f.oscillatory}};
}

json to_json(const RunSummary& s) {
  auto fit = [](const std::optional<DecayFit>& f) { return f ? to_json(*f) : json(nullptr); };
  json out = {
      {"fit_seminorm_wx2", fit(s.fit_wx2)},
      {"fit_seminorm_vxx2", fit(s.fit_vxx2)},
      {"fit_seminorm_uxx2", fit(s.fit_uxx2)},
      {"fit_energy_y", fit(s.fit_y)},
      {"fit_theta_deviation", fit(s.fit_theta_dev)},
      {"fit_theta_x_linf", fit(s.fit_theta_x)},
      {"fit_h_linf", fit(s.fit_h)},
      {"kappa_theoretical", opt(s.kappa_theoretical)},
      {"kappa0_theoretical", opt(s.kappa0_theoretical)},
      {"kappa_fitted", opt(s.kappa_fitted)},
      {"first_te_violation", opt(s.first_te_violation)},
      {"two_sided_all", s.two_sided_all},
      {"means_conserved", s.means_conserved},
      {"theta_mean_nondecreasing", s.theta_mean_nondecreasing},
      {"theta_nonnegative", s.theta_nonnegative},
  };
  if (s.theta_infty) {
    out["theta_infty"] = {{"value", s.theta_infty->theta_infty},
                          {"correction", s.theta_infty->correction},
                          {"tail_rate", opt(s.theta_infty->tail_rate)},
                          {"tail_goodness", opt(s.theta_infty->tail_goodness)}};
  } else {
    out["theta_infty"] = nullptr;
  }
  if (s.lyapunov) {
    const auto& l = *s.lyapunov;
    out["lyapunov"] = {{"ok", l.ok},
                       {"pairs", l.pairs},
                       {"violations", l.violations},
                       {"worst_ratio", num(l.worst_ratio)},
                       {"first_violation", opt(l.first_violation)},
                       {"te_window_end", l.te_window_end},
                       {"ok_in_te_window", l.ok_in_te_window},
                       {"tolerance", l.tolerance}};
  } else {
    out["lyapunov"] = nullptr;
  }
  if (s.selfmap) {
    const auto& m = *s.selfmap;
    out["selfmap"] = {{"eta", m.eta}, {"theta_bound", m.theta_bound}, {"T_eps", m.T_eps}, {"loop_closes", m.loop_closes}};
  } else {
    out["selfmap"] = nullptr;
  }
  return out;
}

void write_timeseries_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records) {
  for (std::size_t i = 0; i < kRecordColumns.size(); ++i) out << (i ? "," : "") << kRecordColumns[i];
  out << '\n';
  for (const auto& r : records) {
    const double cols[] = {r.t,           r.seminorm_wx2, r.seminorm_vxx2, r.seminorm_uxx2, r.energy_y,
                           r.theta_min,   r.theta_max,    r.theta_mean,    r.theta_x_linf,  r.theta_xx_linf,
                           r.theta_t_linf, r.mean_u,      r.mean_v,        r.mean_w,        r.h_linf,
                           r.h_x_l2};
    for (double c : cols) out << format_double(c) << ',';
    out << (r.te_satisfied ? 1 : 0) << ',' << (r.two_sided_ok ? 1 : 0) << '\n';
  }
}

void write_final_state_csv(std::ostream& out, const State& s) {
  out << "x,u,v,w,theta\n";
  const Grid& g = s.grid();
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    out << format_double(g.x(i)) << ',' << format_double(s.u[i]) << ',' << format_double(s.v[i]) << ','
        << format_double(s.w[i]) << ',' << format_double(s.theta[i]) << '\n';
  }
}

RunOutcome execute_scenario(const Scenario& sc) {
  RunOutcome out;
  const Grid grid = build_grid(sc.length, sc.cells);
  out.initial = make_initial_data(sc.init, grid);
  out.A = compute_A(out.initial.state, sc.params.eps);
  if (sc.params.dissipation_dominated()) {
    try {
      out.ledger = compute_ledger(sc.params, sc.gamma, sc.theta_star, sc.length);
    } catch (const Error& e) {
      out.ledger_note = e.what();
    }
  } else {
    out.ledger_note = "not dissipation-dominated: alpha*b <= tau";
  }
  const ConstantsLedger* lp = out.ledger ? &*out.ledger : nullptr;
  RunOptions ro{lp, sc.checks.eta_override, sc.theta_star};
  out.trajectory = run_simulation(out.initial.state, sc.params, sc.gamma, sc.time, ro);

  SummaryOptions so;
  so.ledger = lp;
  so.eta_override = sc.checks.eta_override;
  so.theta_star = sc.theta_star;
  so.A = out.A;
  so.enable_lyapunov = sc.checks.enable_lyapunov;
  so.enable_selfmap = sc.checks.enable_selfmap;
  out.summary = summarize(out.trajectory, so);
  if (out.ledger) {
    out.ledger->k4 = out.summary.k4;
    out.ledger->k6 = out.summary.k6;
  }
  return out;
}

int cmd_run(const Scenario& sc, const std::string& out_dir, std::ostream& log) {
  ensure_dir(out_dir);
  const RunOutcome o = execute_scenario(sc);
  const Trajectory& tr = o.trajectory;
  {
    auto f = open_out(fs::path(out_dir) / "timeseries.csv");
    write_timeseries_csv(f, tr.records);
  }
  {
    auto f = open_out(fs::path(out_dir) / "final_state.csv");
    write_final_state_csv(f, tr.final_state);
  }
  json summary = to_json(o.summary);
  summary["status"] = std::string(status_name(tr.status));
  summary["failure_reason"] = tr.failure_reason;
  summary["blowup_time"] = opt(tr.blowup_time);
  summary["steps"] = tr.steps;
  summary["dt_initial"] = tr.dt_initial;
  summary["dt_final"] = tr.dt_final;
  summary["t_final"] = tr.final_state.t;
  summary["A"] = o.A;
  summary["mechanical_smallness"] = o.initial.mechanical_smallness;
  summary["thermal_smallness"] = o.initial.thermal_smallness;
  summary["ledger"] = o.ledger ? to_json(*o.ledger) : json(nullptr);
  if (!o.ledger) summary["ledger_note"] = o.ledger_note;
  summary["scenario"] = to_json(sc);
  {
    auto f = open_out(fs::path(out_dir) / "summary.json");
    f << summary.dump(2) << '\n';
  }
  log << "status " << status_name(tr.status) << ", " << tr.steps << " steps, " << tr.records.size() << " saves\n";
  if (!tr.failure_reason.empty()) log << tr.failure_reason << '\n';
  return exit_code(tr.status);
}

int cmd_constants(const Scenario& sc, std::ostream& out, std::ostream& err) {
  if (!sc.params.dissipation_dominated()) {
    err << "not dissipation-dominated: alpha*b <= tau\n";
    return kExitNotDissipative;
  }
  const ConstantsLedger l = compute_ledger(sc.params, sc.gamma, sc.theta_star, sc.length);
  out << to_json(l).dump(2) << '\n';
  return kExitOk;
}

namespace {

SweepRow run_point(const SweepSpec& spec, const Params& p) {
  SweepRow row;
  row.params = p;
  const Scenario& base = spec.base;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const Grid grid = build_grid(base.length, base.cells);

  row.oracle_max_re = row.oracle_rate = nan;
  if (base.gamma.is_constant()) {
    row.stable = routh_hurwitz_stable(p, base.gamma.a);
    const double mu = discrete_mode_eigenvalue(grid, spec.mode);
    row.oracle_max_re = regularized_mode_matrix(p, base.gamma, mu).max_real_part;
    row.oracle_rate = -2.0 * row.oracle_max_re;
  } else {
    row.stable = p.dissipation_dominated();
  }

  const InitialData init = make_initial_data(base.init, grid);
  const Trajectory tr = run_simulation(init.state, p, base.gamma, base.time);
  row.status = tr.status;
  row.sim_rate = nan;
  row.sim_goodness = nan;
  if (tr.records.size() >= 2) {
    const double t0 = tr.records.front().t, t1 = tr.records.back().t;
    double lo = t0 + 0.5 * (t1 - t0), hi = t1;
    if (spec.fit_window) {
      lo = std::max(spec.fit_window->first, t0);
      hi = std::min(spec.fit_window->second, t1);
    }
    std::vector<double> t, v;
    for (const auto& r : tr.records) {
      t.push_back(r.t);
      v.push_back(r.seminorm_vxx2);
    }
    try {
      const DecayFit f = fit_decay(t, v, lo, hi);
      row.sim_rate = f.rate;
      row.sim_goodness = f.goodness;
    } catch (const Error&) {
    }
  }
  row.agree = std::isfinite(row.sim_rate) && std::isfinite(row.oracle_rate) &&
              std::abs(row.sim_rate - row.oracle_rate) <= 0.1 * std::abs(row.oracle_rate);
  return row;
}

std::vector<Params> expand(const SweepSpec& spec) {
  std::vector<Params> pts{spec.base.params};
  for (const auto& [key, vals] : spec.values) {
    std::vector<Params> next;
    for (const Params& p : pts) {
      for (double v : vals) {
        Params q = p;
        if (key == "tau") q.tau = v;
        else if (key == "alpha") q.alpha = v;
        else if (key == "b") q.b = v;
        else if (key == "D") q.D = v;
        else if (key == "eps") q.eps = v;
        next.push_back(q);
      }
    }
    pts = std::move(next);
  }
  return pts;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  const std::vector<Params> pts = expand(spec);
  std::vector<SweepRow> rows(pts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pts.size(); i = next++) rows[i] = run_point(spec, pts[i]);
  };
  unsigned n = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(1, pts.size())));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    const auto& p = a.params;
    const auto& q = b.params;
    return std::tie(p.tau, p.alpha, p.b, p.D, p.eps) < std::tie(q.tau, q.alpha, q.b, q.D, q.eps);
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    const auto& p = r.params;
    out << format_double(p.tau) << ',' << format_double(p.alpha) << ',' << format_double(p.b) << ','
        << format_double(p.D) << ',' << format_double(p.eps) << ',' << (r.stable ? 1 : 0) << ','
        << format_double(r.oracle_max_re) << ',' << format_double(r.oracle_rate) << ',' << format_double(r.sim_rate)
        << ',' << format_double(r.sim_goodness) << ',' << status_name(r.status) << ',' << (r.agree ? 1 : 0) << '\n';
  }
}

int cmd_sweep(const SweepSpec& spec, const std::string& out_dir, std::ostream& log) {
  ensure_dir(out_dir);
  const auto rows = run_sweep(spec);
  auto f = open_out(fs::path(out_dir) / "sweep.csv");
  write_sweep_csv(f, rows);
  log << rows.size() << " points written\n";
  return kExitOk;
}

int cmd_oracle(const OracleRequest& req, std::ostream& out, std::ostream& err) {
  if (!(req.gamma > 0.0)) {
    err << "gamma must be a positive constant\n";
    return kExitUsage;
  }
  const GammaSpec g = GammaSpec::constant(req.gamma);
  std::optional<Grid> grid;
  if (req.cells) grid = build_grid(req.length, *req.cells);
  out << kOracleHeader << '\n';
  for (int k = 1; k <= req.k_max; ++k) {
    const double mu = grid ? discrete_mode_eigenvalue(*grid, k)
                           : std::pow(k * std::numbers::pi / req.length, 2);
    std::array<std::complex<double>, 3> roots;
    double max_re = 0.0;
    if (req.params.eps > 0.0) {
      const ModeMatrix m = regularized_mode_matrix(req.params, g, mu);
      roots = m.eigenvalues;
      max_re = m.max_real_part;
    } else {
      const ModeSpectrum s = char_roots(req.params, g, mu, k);
      roots = s.roots;
      max_re = s.max_real_part;
    }
    out << k << ',' << format_double(mu);
    for (const auto& r : roots) out << ',' << format_double(r.real()) << ',' << format_double(r.imag());
    out << ',' << format_double(max_re) << '\n';
  }
  return kExitOk;
}

int cmd_oracle(const Scenario& sc, int k_max, bool discrete, std::ostream& out, std::ostream& err) {
  if (!sc.gamma.is_constant()) {
    err << "NonConstantGamma: the linear oracle needs a constant gamma\n";
    return kExitNonConstantGamma;
  }
  OracleRequest req;
  req.params = sc.params;
  req.gamma = sc.gamma.a;
  req.length = sc.length;
  req.k_max = k_max;
  if (discrete) req.cells = sc.cells;
  return cmd_oracle(req, out, err);
}

}  // namespace mgt
