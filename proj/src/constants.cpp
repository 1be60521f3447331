#include "mgt/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mgt {

namespace {

constexpr double kRelSlack = 1e-12;

double min_of(const std::array<double, 4>& a) { return *std::min_element(a.begin(), a.end()); }
double max_of(const std::array<double, 4>& a) { return *std::max_element(a.begin(), a.end()); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

Frame choose_frame(const Params& params) {
  params.validate();
  if (!params.dissipation_dominated()) {
    throw Error(Errc::NotDissipationDominated, "alpha*b <= tau leaves no admissible B in (1/b, alpha/tau)");
  }
  const double tau = params.tau, alpha = params.alpha, b = params.b;
  Frame f{};
  // Midpoints written as single quotients to keep rounding to one operation where the inputs allow.
  f.B = (tau + alpha * b) / (2.0 * b * tau);
  f.b1 = (1.0 + b * f.B) / (2.0 * f.B);
  f.B1 = f.B * (tau * f.B + alpha) / (2.0 * alpha);
  return f;
}

DeltaBounds delta1_bounds(const Params& p, const Frame& f, double gamma_star, double poincare_c1) {
  const double c2 = 0.5 * p.tau * (1.0 - p.tau * f.B * f.B / (p.alpha * f.B1));
  DeltaBounds d{};
  d.from_551 = p.alpha * (f.B - f.B1) / (2.0 * p.tau);
  d.from_552 = p.b * gamma_star / (2.0 * poincare_c1 * (p.tau * p.tau / (2.0 * c2) + p.alpha / (f.B - f.B1)));
  return d;
}

std::array<double, 4> k1_arguments(const Params& p, const Frame& f, double c2_550, double gamma_star) {
  return {c2_550 / 2.0, (p.b - f.b1) * gamma_star / 2.0, (f.B * f.b1 - 1.0) * gamma_star / (2.0 * f.b1), gamma_star};
}

std::array<double, 4> k2_arguments(const Params& p, const Frame& f, double c2_550, double gamma_star,
                                   double gamma_upper, double poincare_c1, double delta) {
  const double tau = p.tau, alpha = p.alpha, b = p.b;
  return {
      tau / 2.0 + tau * tau * f.B * f.B / (2.0 * alpha * f.B1) + c2_550 / 2.0,
      (b + f.b1) * gamma_upper / 2.0 + (1.0 + tau) * f.B / 2.0 + poincare_c1 * alpha * (3.0 * f.B + f.B1) / 4.0,
      (f.B + b * delta) * gamma_upper / 2.0 + gamma_upper / (2.0 * f.b1) + b * delta * gamma_star / 2.0,
      gamma_upper,
  };
}

std::array<double, 4> delta_arguments(const Params& p, double delta1, double c3, double c4, double gamma_star) {
  const double tau = p.tau, alpha = p.alpha;
  return {
      delta1,
      c3 / (4.0 * c4 * alpha),
      c3 / (8.0 * (4.0 * alpha * alpha / gamma_star + tau)),
      gamma_star / ((1.0 + tau) * (1.0 + tau)),
  };
}

std::array<double, 4> kappa_arguments(const Params& p, const Frame& f, double c2, double c3, double delta,
                                      double gamma_star, double k2) {
  return {
      c2 / (2.0 * k2),
      c3 / (2.0 * k2),
      delta * gamma_star / (4.0 * k2),
      (f.B + p.b * delta) * gamma_star / (2.0 * k2),
  };
}

std::array<double, 4> eta_bounds(const ConstantsLedger& l, const Params& p) {
  const double G = l.Gamma_star, gs = l.gamma_star, b = p.b, Bd = l.B + b * l.delta;
  return {
      (l.c2_66 / 2.0) / l.c5,
      (l.c3_66 / 8.0) / (l.c6 + b * G * G / gs),
      (l.delta * gs / 4.0) / (l.c7 + G * G / (b * gs)),
      (Bd * gs / 2.0) / (l.c8 + G * G / (2.0 * gs)),
  };
}

ConstantsLedger compute_ledger(const Params& params, const GammaSpec& gamma, double theta_star, double length) {
  params.validate();
  if (!(theta_star > 0.0) || !std::isfinite(theta_star)) throw Error(Errc::InvalidSpec, "theta_star must be positive");
  if (!(length > 0.0) || !std::isfinite(length)) throw Error(Errc::InvalidSpec, "domain length must be positive");
  if (!params.dissipation_dominated()) {
    throw Error(Errc::NotDissipationDominated, "alpha*b <= tau leaves no admissible B in (1/b, alpha/tau)");
  }
  gamma.validate(theta_star);

  const double tau = params.tau, alpha = params.alpha, b = params.b;
  const double pi2 = std::numbers::pi * std::numbers::pi;

  ConstantsLedger l;
  l.theta_star = theta_star;
  l.length = length;

  // Every family has closed-form critical points, so the sampled extrema are exact and
  // gamma_star needs no sampling slack.
  const GammaBounds gb = gamma_bounds(gamma, 0.0, 2.0 * theta_star);
  l.gamma_star = 0.5 * gb.min_value;
  l.gamma_upper = 2.0 * gb.max_value;
  l.Gamma_star = 1.0 + gb.max_abs_first;
  l.gpp_bound = 1.0 + gb.max_abs_second;

  const Frame f = choose_frame(params);
  l.B = f.B;
  l.b1 = f.b1;
  l.B1 = f.B1;

  l.c2_550 = 0.5 * tau * (1.0 - tau * f.B * f.B / (alpha * f.B1));
  l.c2_66 = alpha - tau * f.B;
  l.c3_66 = (b * f.B - 1.0) * l.gamma_star;

  l.poincare_c1 = length * length / pi2;
  l.poincare_c4 = length * length / pi2;
  l.embed_c1 = std::sqrt(length);

  const DeltaBounds db = delta1_bounds(params, f, l.gamma_star, l.poincare_c1);
  l.delta1 = std::min(db.from_551, db.from_552);
  l.delta = min_of(delta_arguments(params, l.delta1, l.c3_66, l.poincare_c4, l.gamma_star));

  l.k1 = min_of(k1_arguments(params, f, l.c2_550, l.gamma_star));
  l.k2 = max_of(k2_arguments(params, f, l.c2_550, l.gamma_star, l.gamma_upper, l.poincare_c1, l.delta));
  l.kappa = min_of(kappa_arguments(params, f, l.c2_66, l.c3_66, l.delta, l.gamma_star, l.k2));

  const double G = l.Gamma_star, c1 = l.gpp_bound, c4 = l.poincare_c4, B = f.B, d = l.delta;
  l.c5 = 2.0 * (b * G / 4.0 + G / 4.0) + b * c1 / 4.0 + c1 / 4.0;
  l.c6 = b * G / 2.0 + G / 4.0 + b * G + b * G * c4 + b * c1 * c4 + b * B * G * c4 + b * B * G / 4.0 + B * G / 4.0 +
         b * G * c4 * d + G / 4.0;
  l.c7 = 2.0 * G + (B + b * d) * G / 2.0 + G * c4 + c1 * c4 + b * G * c4 + b * G * d / 4.0 + G * c4 * d + G * d / 4.0 +
         (B + b * d) * G;
  l.c8 = 2.0 * G + (B + b * d) * G / 4.0;

  l.eta = std::min(1.0, min_of(eta_bounds(l, params)));
  l.k3 = std::max(l.k2 / l.k1, 2.0 * l.k2 / (b * l.gamma_star));

  l.lambda_D = params.D * pi2 / (length * length);
  l.kappa0 = std::min(l.kappa, 0.9 * l.lambda_D);

  const auto problems = verify_ledger(l, params);
  if (!problems.empty()) {
    std::string msg = "constant chain failed its own verification:";
    for (const auto& p : problems) msg += " [" + p + "]";
    throw Error(Errc::InvalidSpec, msg);
  }
  return l;
}

std::vector<std::string> verify_ledger(const ConstantsLedger& l, const Params& p) {
  std::vector<std::string> bad;
  auto le = [&](double lhs, double rhs, const std::string& what) {
    if (!(lhs <= rhs + kRelSlack * std::abs(rhs))) bad.push_back(what + ": " + fmt(lhs) + " > " + fmt(rhs));
  };
  auto lt = [&](double lhs, double rhs, const std::string& what) {
    if (!(lhs < rhs)) bad.push_back(what + ": " + fmt(lhs) + " >= " + fmt(rhs));
  };
  auto pos = [&](double x, const std::string& what) {
    if (!(x > 0.0)) bad.push_back(what + " not positive: " + fmt(x));
  };

  lt(1.0 / p.b, l.B, "1/b < B");
  lt(l.B, p.alpha / p.tau, "B < alpha/tau");
  lt(1.0 / l.b1, l.B, "1/b1 < B");
  lt(l.B * l.B / l.B1, p.alpha / p.tau, "B^2/B1 < alpha/tau");
  lt(l.b1, p.b, "b1 < b");
  lt(l.B1, l.B, "B1 < B");
  pos(l.c2_550, "c2_550");
  pos(l.c2_66, "c2_66");
  pos(l.c3_66, "c3_66");
  pos(l.delta, "delta");
  pos(l.kappa, "kappa");
  pos(l.k1, "k1");
  pos(l.eta, "eta");
  pos(l.kappa0, "kappa0");
  le(l.delta, l.delta1, "delta <= delta1");
  le(l.eta, 1.0, "eta <= 1");
  le(l.k1, l.k2, "k1 <= k2");
  le(l.kappa0, l.kappa, "kappa0 <= kappa");
  lt(l.kappa0, l.lambda_D, "kappa0 < lambda_D");

  // Conditions on delta used by the two-sided estimate.
  le(p.tau * l.delta, p.alpha * (l.B - l.B1) / 2.0, "tau delta <= alpha (B - B1)/2");
  const double q = p.tau * p.tau / (2.0 * l.c2_550) + p.alpha / (l.B - l.B1);
  le(q * l.delta * l.delta * l.poincare_c1, p.b * l.gamma_star / 2.0 * l.delta, "Poincare absorption of delta^2 terms");

  // The four smallness requirements on eta.
  const double G = l.Gamma_star, gs = l.gamma_star, b = p.b, Bd = l.B + b * l.delta;
  le(l.c5 * l.eta, l.c2_66 / 2.0, "c5 eta <= c2/2");
  le((l.c6 + b * G * G / gs) * l.eta, l.c3_66 / 8.0, "(c6 + b G^2/gs) eta <= c3/8");
  le((l.c7 + G * G / (b * gs)) * l.eta, l.delta * gs / 4.0, "(c7 + G^2/(b gs)) eta <= delta gs/4");
  le((l.c8 + G * G / (2.0 * gs)) * l.eta, Bd * gs / 2.0, "(c8 + G^2/(2 gs)) eta <= (B + b delta) gs/2");
  return bad;
}

double compute_A(const State& state0, double eps) {
  state0.validate();
  const Grid& g = state0.grid();
  const double h = g.spacing();
  std::vector<double> tmp(g.nodes()), tmp2(g.nodes());
  auto int_sq = [&](const std::vector<double>& f) {
    std::vector<double> sq(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) sq[i] = f[i] * f[i];
    return kernels::quad_trapz(sq, h);
  };
  double A = 0.0;
  kernels::d1_central(state0.w.values(), h, tmp);
  A += int_sq(tmp);
  kernels::d2_neumann(state0.v.values(), h, tmp);
  A += int_sq(tmp);
  kernels::d2_neumann(state0.u.values(), h, tmp);
  A += int_sq(tmp);
  if (eps > 0.0) {
    kernels::d1_central(tmp, h, tmp2);
    A += eps * int_sq(tmp2);
  }
  return A;
}

}  // namespace mgt
