#include "mgt/gamma.hpp"

#include <algorithm>
#include <cmath>

#include "mgt/errors.hpp"

namespace mgt {

std::string_view family_name(GammaFamily family) {
  switch (family) {
    case GammaFamily::Constant: return "constant";
    case GammaFamily::ExpDecay: return "exp_decay";
    case GammaFamily::Rational: return "rational";
    case GammaFamily::GaussianBump: return "gaussian_bump";
  }
  return "unknown";
}

GammaSpec GammaSpec::constant(double value) {
  GammaSpec g;
  g.family = GammaFamily::Constant;
  g.a = value;
  return g;
}

GammaSpec GammaSpec::exp_decay(double a, double b, double c) {
  GammaSpec g;
  g.family = GammaFamily::ExpDecay;
  g.a = a;
  g.b = b;
  g.c = c;
  return g;
}

GammaSpec GammaSpec::rational(double a, double b) {
  GammaSpec g;
  g.family = GammaFamily::Rational;
  g.a = a;
  g.b = b;
  return g;
}

GammaSpec GammaSpec::gaussian_bump(double a, double b, double m, double s) {
  GammaSpec g;
  g.family = GammaFamily::GaussianBump;
  g.a = a;
  g.b = b;
  g.m = m;
  g.s = s;
  return g;
}

void GammaSpec::validate(double theta_star) const {
  auto fail = [this](const std::string& why) {
    throw Error(Errc::InvalidSpec, std::string(family_name(family)) + ": " + why);
  };
  const bool finite = std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(m) && std::isfinite(s);
  if (!finite) fail("parameters must be finite");
  switch (family) {
    case GammaFamily::Constant:
      if (!(a > 0.0)) fail("c must be positive");
      break;
    case GammaFamily::ExpDecay:
      if (!(a > 0.0) || b < 0.0 || c < 0.0) fail("requires a > 0, b >= 0, c >= 0");
      break;
    case GammaFamily::Rational:
      if (!(a > 0.0) || !(a + b > 0.0)) fail("requires a > 0 and a + b > 0");
      break;
    case GammaFamily::GaussianBump:
      if (!(a > 0.0) || !(a + std::min(b, 0.0) > 0.0) || !(s > 0.0)) fail("requires a > 0, a + min(b,0) > 0, s > 0");
      break;
  }
  if (theta_star > 0.0) {
    const double hi = 4.0 * theta_star;
    const int n = 10000;
    for (int i = 0; i <= n; ++i) {
      const double xi = hi * i / n;
      if (!(gamma_eval(*this, xi).value > 0.0)) {
        throw Error(Errc::GammaNotPositive, "gamma is not positive at xi = " + std::to_string(xi));
      }
    }
  }
}

GammaValue gamma_eval(const GammaSpec& g, double xi) {
  if (xi < 0.0 || std::isnan(xi)) throw Error(Errc::NegativeArgument, "gamma evaluated at xi = " + std::to_string(xi));
  switch (g.family) {
    case GammaFamily::Constant:
      return {g.a, 0.0, 0.0};
    case GammaFamily::ExpDecay: {
      const double e = g.b * std::exp(-g.c * xi);
      return {g.a + e, -g.c * e, g.c * g.c * e};
    }
    case GammaFamily::Rational: {
      const double q = 1.0 + xi * xi;
      return {g.a + g.b / q, -2.0 * g.b * xi / (q * q), g.b * (6.0 * xi * xi - 2.0) / (q * q * q)};
    }
    case GammaFamily::GaussianBump: {
      const double z = (xi - g.m) / g.s;
      const double e = g.b * std::exp(-z * z);
      return {g.a + e, -2.0 * z / g.s * e, (4.0 * z * z - 2.0) / (g.s * g.s) * e};
    }
  }
  return {0.0, 0.0, 0.0};
}

void gamma_values(const GammaSpec& g, std::span<const double> xi, std::span<double> out) {
  const std::size_t n = xi.size();
  switch (g.family) {
    case GammaFamily::Constant:
      std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n), g.a);
      return;
    case GammaFamily::ExpDecay:
      for (std::size_t i = 0; i < n; ++i) out[i] = g.a + g.b * std::exp(-g.c * std::max(xi[i], 0.0));
      return;
    case GammaFamily::Rational:
      for (std::size_t i = 0; i < n; ++i) out[i] = g.a + g.b / (1.0 + xi[i] * xi[i]);
      return;
    case GammaFamily::GaussianBump:
      for (std::size_t i = 0; i < n; ++i) {
        const double z = (std::max(xi[i], 0.0) - g.m) / g.s;
        out[i] = g.a + g.b * std::exp(-z * z);
      }
      return;
  }
}

std::vector<double> gamma_critical_points(const GammaSpec& g, double lo, double hi) {
  std::vector<double> pts{lo, hi};
  auto add = [&](double x) {
    if (x > lo && x < hi) pts.push_back(x);
  };
  switch (g.family) {
    case GammaFamily::Constant:
    case GammaFamily::ExpDecay:
      break;
    case GammaFamily::Rational:
      // gamma'' vanishes at 1/sqrt(3) (extremum of gamma'); gamma''' vanishes at 0 and 1.
      add(0.0);
      add(1.0 / std::sqrt(3.0));
      add(1.0);
      break;
    case GammaFamily::GaussianBump:
      add(g.m);
      add(g.m - g.s / std::sqrt(2.0));
      add(g.m + g.s / std::sqrt(2.0));
      add(g.m - g.s * std::sqrt(1.5));
      add(g.m + g.s * std::sqrt(1.5));
      break;
  }
  return pts;
}

GammaBounds gamma_bounds(const GammaSpec& g, double lo, double hi, int samples) {
  GammaBounds out{INFINITY, -INFINITY, 0.0, 0.0};
  auto visit = [&](double xi) {
    const GammaValue v = gamma_eval(g, xi);
    out.min_value = std::min(out.min_value, v.value);
    out.max_value = std::max(out.max_value, v.value);
    out.max_abs_first = std::max(out.max_abs_first, std::abs(v.first));
    out.max_abs_second = std::max(out.max_abs_second, std::abs(v.second));
  };
  for (int i = 0; i <= samples; ++i) visit(lo + (hi - lo) * i / samples);
  for (double xi : gamma_critical_points(g, lo, hi)) visit(xi);
  return out;
}

}  // namespace mgt
