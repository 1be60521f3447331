#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mgt {

enum class GammaFamily { Constant, ExpDecay, Rational, GaussianBump };

std::string_view family_name(GammaFamily family);

// Temperature-dependent stiffness with closed-form derivatives.
//   constant:      c
//   exp_decay:     a + b exp(-c xi)              (a > 0, b >= 0, c >= 0)
//   rational:      a + b / (1 + xi^2)            (a > 0, a + b > 0)
//   gaussian_bump: a + b exp(-(xi - m)^2 / s^2)  (a > 0, a + min(b, 0) > 0, s > 0)
struct GammaSpec {
  GammaFamily family = GammaFamily::Constant;
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double m = 0.0;
  double s = 1.0;

  static GammaSpec constant(double value);
  static GammaSpec exp_decay(double a, double b, double c);
  static GammaSpec rational(double a, double b);
  static GammaSpec gaussian_bump(double a, double b, double m, double s);

  bool is_constant() const { return family == GammaFamily::Constant; }

  /// Throws InvalidSpec if the family parameters cannot give a strictly positive
  /// gamma on [0, inf), and GammaNotPositive if a dense sample of [0, 4*theta_star]
  /// finds a non-positive value.
  void validate(double theta_star) const;
};

struct GammaValue {
  double value;
  double first;
  double second;
};

/// Throws NegativeArgument for xi < 0.
GammaValue gamma_eval(const GammaSpec& spec, double xi);

// Unchecked value-only evaluation over a span (xi is clamped at 0 for roundoff-negative inputs).
void gamma_values(const GammaSpec& spec, std::span<const double> xi, std::span<double> out);

// Points in [lo, hi] at which gamma, |gamma'| or |gamma''| may attain an extremum:
// the endpoints plus the family's interior critical points.
std::vector<double> gamma_critical_points(const GammaSpec& spec, double lo, double hi);

struct GammaBounds {
  double min_value;
  double max_value;
  double max_abs_first;
  double max_abs_second;
};

/// Extrema over [lo, hi] from `samples` uniform points joined with the analytic critical points.
GammaBounds gamma_bounds(const GammaSpec& spec, double lo, double hi, int samples = 10000);

}  // namespace mgt
