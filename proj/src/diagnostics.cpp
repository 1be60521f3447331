#include "mgt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mgt {

namespace {

using Vec = std::vector<double>;

double int_sq(const Vec& f, double h) {
  Vec sq(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sq[i] = f[i] * f[i];
  return kernels::quad_trapz(sq, h);
}

double int_prod(const Vec& f, const Vec& g, double h) {
  Vec p(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) p[i] = f[i] * g[i];
  return kernels::quad_trapz(p, h);
}

double int_weighted(const Vec& c, const Vec& f, const Vec& g, double h) {
  Vec p(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) p[i] = c[i] * f[i] * g[i];
  return kernels::quad_trapz(p, h);
}

// All derivatives the energy functional and the seminorms need.
struct Parts {
  double h = 0.0;
  Vec coef, ux, uxx, uxxx, vx, vxx, wx;

  Parts(const State& s, const GammaSpec& gamma) {
    const std::size_t n = s.grid().nodes();
    h = s.grid().spacing();
    coef.resize(n);
    ux.resize(n);
    uxx.resize(n);
    uxxx.resize(n);
    vx.resize(n);
    vxx.resize(n);
    wx.resize(n);
    gamma_values(gamma, s.theta.values(), coef);
    kernels::d1_central(s.u.values(), h, ux);
    kernels::d2_neumann(s.u.values(), h, uxx);
    kernels::d1_central(uxx, h, uxxx);
    kernels::d1_central(s.v.values(), h, vx);
    kernels::d2_neumann(s.v.values(), h, vxx);
    kernels::d1_central(s.w.values(), h, wx);
  }

  double wx2() const { return int_sq(wx, h); }
  double vxx2() const { return int_sq(vxx, h); }
  double uxx2() const { return int_sq(uxx, h); }
  double uxxx2() const { return int_sq(uxxx, h); }

  double y(const Params& p, const ConstantsLedger& l) const {
    const double tau = p.tau, alpha = p.alpha, b = p.b, eps = p.eps, B = l.B, d = l.delta;
    double y = 0.0;
    y += 0.5 * tau * wx2();
    y += 0.5 * b * int_weighted(coef, vxx, vxx, h);
    y += 0.5 * (B + b * d) * int_weighted(coef, uxx, uxx, h);
    y += 0.5 * (alpha * B - tau * d) * int_sq(vx, h);
    y += int_weighted(coef, uxx, vxx, h);
    if (eps > 0.0) {
      y += eps * int_weighted(coef, uxxx, uxxx, h);
      y += 0.5 * (1.0 + tau) * B * eps * vxx2();
    }
    y += tau * B * int_prod(vx, wx, h);
    y += tau * d * int_prod(ux, wx, h);
    y += alpha * d * int_prod(ux, vx, h);
    return y;
  }

  bool gamma_in_band(const ConstantsLedger& l) const {
    const auto [lo, hi] = std::minmax_element(coef.begin(), coef.end());
    return *lo >= l.gamma_star && *hi <= l.gamma_upper;
  }
};

TwoSidedCheck two_sided_from(const Parts& parts, const Params& p, const ConstantsLedger& l) {
  TwoSidedCheck c;
  c.y = parts.y(p, l);
  c.S = parts.wx2() + parts.vxx2() + parts.uxx2() + (p.eps > 0.0 ? p.eps * parts.uxxx2() : 0.0);
  c.lower_margin = c.y - l.k1 * c.S;
  c.upper_margin = l.k2 * c.S - c.y;
  const double tol = 1e-10 * std::max(std::abs(c.y), l.k2 * c.S);
  c.ok = c.lower_margin >= -tol && c.upper_margin >= -tol;
  c.gamma_in_band = parts.gamma_in_band(l);
  return c;
}

double mean_of(std::span<const double> f, const Grid& g) { return kernels::quad_trapz(f, g.spacing()) / g.length(); }

}  // namespace

double DiagnosticsRecord::theta_deviation() const {
  return std::max(theta_max - theta_mean, theta_mean - theta_min);
}

std::optional<double> RecordContext::eta() const {
  if (eta_override) return eta_override;
  if (ledger) return ledger->eta;
  return std::nullopt;
}

std::optional<double> RecordContext::star() const {
  if (theta_star) return theta_star;
  if (ledger) return ledger->theta_star;
  return std::nullopt;
}

double energy_y(const State& state, const Params& params, const GammaSpec& gamma, const ConstantsLedger* ledger) {
  if (!ledger) throw Error(Errc::MissingLedger, "energy functional needs the constants ledger (B, delta)");
  state.validate();
  return Parts(state, gamma).y(params, *ledger);
}

TwoSidedCheck check_two_sided(const State& state, const Params& params, const GammaSpec& gamma,
                              const ConstantsLedger& ledger) {
  state.validate();
  return two_sided_from(Parts(state, gamma), params, ledger);
}

HDiagnostics h_diagnostics(const State& state, const Params& params, const GammaSpec& gamma) {
  const Field h = source_h(state, params, gamma);
  const double dx = state.grid().spacing();
  Vec hx(h.size());
  kernels::d1_central(h.values(), dx, hx);
  return {kernels::norm_linf(h.values()), std::sqrt(int_sq(hx, dx))};
}

DiagnosticsRecord compute_record(const State& state, const Params& params, const GammaSpec& gamma,
                                 const RecordContext& ctx) {
  state.validate();
  const Grid& g = state.grid();
  const Parts parts(state, gamma);
  DiagnosticsRecord r;
  r.t = state.t;
  r.seminorm_wx2 = parts.wx2();
  r.seminorm_vxx2 = parts.vxx2();
  r.seminorm_uxx2 = parts.uxx2();
  r.seminorm_uxxx2 = parts.uxxx2();

  const auto th = state.theta.values();
  const auto [lo, hi] = std::minmax_element(th.begin(), th.end());
  r.theta_min = *lo;
  r.theta_max = *hi;
  r.theta_mean = mean_of(th, g);

  Vec tmp(g.nodes());
  kernels::d1_central(th, g.spacing(), tmp);
  r.theta_x_linf = kernels::norm_linf(tmp);
  kernels::d2_neumann(th, g.spacing(), tmp);
  r.theta_xx_linf = kernels::norm_linf(tmp);
  r.theta_t_linf = kernels::norm_linf(theta_time_derivative(state, params, gamma).values());

  r.mean_u = mean_of(state.u.values(), g);
  r.mean_v = mean_of(state.v.values(), g);
  r.mean_w = mean_of(state.w.values(), g);

  const HDiagnostics hd = h_diagnostics(state, params, gamma);
  r.h_linf = hd.h_linf;
  r.h_x_l2 = hd.h_x_l2;

  const auto eta = ctx.eta();
  const auto star = ctx.star();
  if (eta && star) {
    r.te_satisfied =
        r.theta_max <= 2.0 * *star && r.theta_x_linf + r.theta_xx_linf + r.theta_t_linf <= *eta;
  }

  if (ctx.ledger) {
    const TwoSidedCheck c = two_sided_from(parts, params, *ctx.ledger);
    r.energy_y = c.y;
    r.two_sided_ok = c.ok;
    r.lower_margin = c.lower_margin;
    r.upper_margin = c.upper_margin;
    r.gamma_in_band = c.gamma_in_band;
  } else {
    r.energy_y = std::numeric_limits<double>::quiet_NaN();
    r.lower_margin = r.upper_margin = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

LyapunovReport check_lyapunov(const Trajectory& tr, const ConstantsLedger& ledger) {
  LyapunovReport rep;
  const double dt = std::max(tr.dt_initial, tr.dt_final);
  rep.tolerance = 1e-6 + 10.0 * std::pow(dt, 4);
  const auto& rs = tr.records;
  if (rs.empty()) return rep;
  const double y0 = std::abs(rs.front().energy_y);
  // Absolute allowance for roundoff once y has decayed to the level of its own summation error.
  const double floor = 1e-14 * y0;

  std::optional<std::size_t> te_break;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (!rs[i].te_satisfied) {
      te_break = i;
      break;
    }
  }
  rep.te_window_end = te_break ? (*te_break == 0 ? rs.front().t : rs[*te_break - 1].t) : rs.back().t;

  for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
    const double ya = rs[i].energy_y, yb = rs[i + 1].energy_y;
    const double bound = ya * std::exp(-ledger.kappa * (rs[i + 1].t - rs[i].t));
    ++rep.pairs;
    if (ya > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, yb / bound);
    const bool bad = !(yb <= bound * (1.0 + rep.tolerance) + floor);
    if (bad) {
      ++rep.violations;
      if (!rep.first_violation) rep.first_violation = rs[i + 1].t;
      rep.ok = false;
      if (rs[i + 1].t <= rep.te_window_end && (!te_break || i + 1 < *te_break)) rep.ok_in_te_window = false;
    }
  }
  return rep;
}

SelfMapReport check_selfmap(const Trajectory& tr, const ConstantsLedger* ledger, std::optional<double> eta_override,
                            std::optional<double> theta_star) {
  const std::optional<double> eta = eta_override ? eta_override : (ledger ? std::optional(ledger->eta) : std::nullopt);
  const std::optional<double> star = theta_star ? theta_star : (ledger ? std::optional(ledger->theta_star) : std::nullopt);
  if (!eta || !star) throw Error(Errc::MissingLedger, "self-map check needs eta and theta_star");
  SelfMapReport rep;
  rep.eta = *eta;
  rep.theta_bound = 2.0 * *star;
  rep.T_eps = tr.records.empty() ? 0.0 : tr.records.back().t;
  rep.loop_closes = true;
  for (std::size_t i = 0; i < tr.records.size(); ++i) {
    const auto& r = tr.records[i];
    const bool ok = r.theta_max <= rep.theta_bound && r.theta_x_linf + r.theta_xx_linf + r.theta_t_linf <= rep.eta;
    if (!ok) {
      rep.first_violation_index = i;
      rep.T_eps = r.t;
      rep.loop_closes = false;
      break;
    }
  }
  // A run that stopped early never reached t_end.
  if (tr.status != RunStatus::Completed) rep.loop_closes = false;
  return rep;
}

namespace {

struct LineFit {
  double slope, intercept, r2;
};

LineFit least_squares(const Vec& x, const Vec& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f{};
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  // Relative threshold: a series constant up to roundoff has no meaningful correlation.
  const double yscale = std::max(1.0, std::abs(my));
  f.r2 = (sxx > 0.0 && syy > 1e-24 * yscale * yscale * n) ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 0.0;
  return f;
}

// Vertex of the parabola through three points.
std::pair<double, double> parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double d = (x0 - x1) * (x0 - x2) * (x1 - x2);
  const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / d;
  const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / d;
  const double c = (x1 * x2 * (x1 - x2) * y0 + x2 * x0 * (x2 - x0) * y1 + x0 * x1 * (x0 - x1) * y2) / d;
  if (!(a < 0.0)) return {x1, y1};
  const double xv = -b / (2.0 * a);
  if (xv < x0 || xv > x2) return {x1, y1};
  return {xv, c - b * b / (4.0 * a)};
}

}  // namespace

DecayFit fit_decay(std::span<const double> times, std::span<const double> values, double t_lo, double t_hi) {
  if (times.size() != values.size()) throw Error(Errc::InsufficientData, "times and values differ in length");
  const double slack = 1e-12 * std::max(std::abs(t_lo), std::abs(t_hi));
  Vec t, ly;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo - slack || times[i] > t_hi + slack) continue;
    const double v = values[i];
    if (!std::isfinite(v) || v < 0.0) throw Error(Errc::NonPositiveSeries, "series value is negative or non-finite");
    t.push_back(times[i]);
    ly.push_back(std::log(std::max(v, 1e-300)));
  }
  if (t.size() < 10) throw Error(Errc::InsufficientData, "fewer than 10 samples in the fit window");

  int sign_changes = 0;
  int last = 0;
  for (std::size_t i = 0; i + 1 < ly.size(); ++i) {
    const double d = ly[i + 1] - ly[i];
    const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s != 0) {
      if (last != 0 && s != last) ++sign_changes;
      last = s;
    }
  }

  DecayFit out;
  LineFit lf{};
  if (sign_changes > 3) {
    Vec pt, py;
    for (std::size_t i = 1; i + 1 < ly.size(); ++i) {
      if (ly[i] > ly[i - 1] && ly[i] >= ly[i + 1]) {
        const auto [xv, yv] = parabola_vertex(t[i - 1], ly[i - 1], t[i], ly[i], t[i + 1], ly[i + 1]);
        pt.push_back(xv);
        py.push_back(yv);
      }
    }
    if (pt.size() < 2) throw Error(Errc::InsufficientData, "oscillatory series with fewer than 2 peaks in the window");
    lf = least_squares(pt, py);
    if (pt.size() == 2) lf.r2 = 1.0;
    out.samples = pt.size();
    out.oscillatory = true;
  } else {
    lf = least_squares(t, ly);
    out.samples = t.size();
  }
  out.rate = -lf.slope;
  out.amplitude = std::exp(lf.intercept);
  out.goodness = lf.r2;
  return out;
}

ThetaInfty estimate_theta_infty(std::span<const double> times, std::span<const double> means) {
  if (times.size() != means.size() || times.size() < 2) {
    throw Error(Errc::InsufficientData, "need at least two samples of the mean temperature");
  }
  const std::size_t n = means.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (means[i + 1] < means[i] - 1e-12 * std::max(1.0, std::abs(means[i]))) {
      throw Error(Errc::NonMonotoneMean, "mean temperature decreased between saves at t = " + std::to_string(times[i + 1]));
    }
  }
  ThetaInfty out;
  const double t_end = times[n - 1];
  const double m_end = means[n - 1];
  out.theta_infty = m_end;

  // Rate of the increments over the second half, then a geometric tail over the last quarter.
  const double t_half = times[0] + 0.5 * (t_end - times[0]);
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(m_end));
  Vec mid_t, rate_samples;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double tm = 0.5 * (times[i] + times[i + 1]);
    const double inc = means[i + 1] - means[i];
    if (tm < t_half || !(inc > floor)) continue;
    mid_t.push_back(tm);
    rate_samples.push_back(inc / (times[i + 1] - times[i]));
  }
  if (mid_t.size() < 10) return out;
  DecayFit fit;
  try {
    fit = fit_decay(mid_t, rate_samples, mid_t.front(), mid_t.back());
  } catch (const Error&) {
    return out;
  }
  if (!(fit.rate > 0.0)) return out;

  const double t_q = times[0] + 0.75 * (t_end - times[0]);
  std::size_t iq = 0;
  while (iq + 1 < n && times[iq] < t_q) ++iq;
  const double span = t_end - times[iq];
  if (!(span > 0.0)) return out;
  const double q = std::exp(-fit.rate * span);
  out.correction = (m_end - means[iq]) * q / (1.0 - q);
  out.theta_infty = m_end + out.correction;
  return out;
}

Vec series_t(const Trajectory& tr) {
  Vec out;
  for (const auto& r : tr.records) out.push_back(r.t);
  return out;
}

Vec series_seminorm_sum(const Trajectory& tr) {
  Vec out;
  for (const auto& r : tr.records) out.push_back(r.seminorm_wx2 + r.seminorm_vxx2 + r.seminorm_uxx2);
  return out;
}

Vec series_theta_deviation(const Trajectory& tr) {
  Vec out;
  for (const auto& r : tr.records) out.push_back(r.theta_deviation());
  return out;
}

ThetaInfty estimate_theta_infty(const Trajectory& tr) {
  Vec t = series_t(tr), m;
  for (const auto& r : tr.records) m.push_back(r.theta_mean);
  ThetaInfty out = estimate_theta_infty(t, m);
  if (t.size() >= 2) {
    try {
      const DecayFit f = fit_decay(t, series_theta_deviation(tr), 0.5 * (t.front() + t.back()), t.back());
      out.tail_rate = f.rate;
      out.tail_goodness = f.goodness;
    } catch (const Error&) {
    }
  }
  return out;
}

RunSummary summarize(const Trajectory& tr, const SummaryOptions& opt) {
  RunSummary s;
  const auto& rs = tr.records;
  const Vec t = series_t(tr);
  const double lo = t.empty() ? 0.0 : 0.5 * (t.front() + t.back());
  const double hi = t.empty() ? 0.0 : t.back();

  auto try_fit = [&](const Vec& values) -> std::optional<DecayFit> {
    try {
      return fit_decay(t, values, lo, hi);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  auto column = [&](auto member) {
    Vec v;
    for (const auto& r : rs) v.push_back(r.*member);
    return v;
  };

  s.fit_wx2 = try_fit(column(&DiagnosticsRecord::seminorm_wx2));
  s.fit_vxx2 = try_fit(column(&DiagnosticsRecord::seminorm_vxx2));
  s.fit_uxx2 = try_fit(column(&DiagnosticsRecord::seminorm_uxx2));
  s.fit_theta_dev = try_fit(series_theta_deviation(tr));
  s.fit_theta_x = try_fit(column(&DiagnosticsRecord::theta_x_linf));
  s.fit_h = try_fit(column(&DiagnosticsRecord::h_linf));
  if (opt.ledger) {
    s.fit_y = try_fit(column(&DiagnosticsRecord::energy_y));
    s.kappa_theoretical = opt.ledger->kappa;
    s.kappa0_theoretical = opt.ledger->kappa0;
  }
  if (s.fit_y) {
    s.kappa_fitted = s.fit_y->rate;
  } else if (auto f = try_fit(series_seminorm_sum(tr))) {
    s.kappa_fitted = f->rate;
  }
  s.first_te_violation = tr.first_te_violation;

  if (tr.status == RunStatus::Completed) {
    try {
      s.theta_infty = estimate_theta_infty(tr);
    } catch (const Error&) {
    }
  }
  if (opt.ledger && opt.enable_lyapunov) s.lyapunov = check_lyapunov(tr, *opt.ledger);
  if (opt.enable_selfmap) {
    try {
      s.selfmap = check_selfmap(tr, opt.ledger, opt.eta_override, opt.theta_star);
    } catch (const Error&) {
    }
  }

  s.two_sided_all = opt.ledger != nullptr && !rs.empty();
  s.means_conserved = true;
  s.theta_mean_nondecreasing = true;
  s.theta_nonnegative = true;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const auto& r = rs[i];
    if (opt.ledger && !r.two_sided_ok) s.two_sided_all = false;
    const double scale = 1.0 + std::max({r.seminorm_wx2, r.seminorm_vxx2, r.seminorm_uxx2});
    if (std::max({std::abs(r.mean_u), std::abs(r.mean_v), std::abs(r.mean_w)}) > 1e-11 * scale) {
      s.means_conserved = false;
    }
    if (i > 0 && r.theta_mean < rs[i - 1].theta_mean - 1e-12 * std::max(1.0, std::abs(rs[i - 1].theta_mean))) {
      s.theta_mean_nondecreasing = false;
    }
    if (r.theta_min < -1e-12 * std::max(1.0, r.theta_max)) s.theta_nonnegative = false;
  }

  if (s.fit_h && opt.A > 0.0) s.k4 = s.fit_h->amplitude / opt.A;
  if (s.fit_theta_x) s.k6 = s.fit_theta_x->amplitude;
  return s;
}

}  // namespace mgt
