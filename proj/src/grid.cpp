#include "mgt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mgt {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NonPositiveLength: return "NonPositiveLength";
    case Errc::TooFewCells: return "TooFewCells";
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::NonPositiveCoefficient: return "NonPositiveCoefficient";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::NegativeArgument: return "NegativeArgument";
    case Errc::NonFiniteState: return "NonFiniteState";
    case Errc::NonPositiveGamma: return "NonPositiveGamma";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::DegenerateRange: return "DegenerateRange";
    case Errc::NonFiniteResult: return "NonFiniteResult";
    case Errc::NotDissipationDominated: return "NotDissipationDominated";
    case Errc::GammaNotPositive: return "GammaNotPositive";
    case Errc::MissingLedger: return "MissingLedger";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::NonPositiveSeries: return "NonPositiveSeries";
    case Errc::NonMonotoneMean: return "NonMonotoneMean";
    case Errc::NonConstantGamma: return "NonConstantGamma";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Grid build_grid(double length, int cells) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(Errc::NonPositiveLength, "domain length must be positive, got " + std::to_string(length));
  }
  if (cells < kMinCells) {
    throw Error(Errc::TooFewCells, "need at least " + std::to_string(kMinCells) + " cells, got " +
                                       std::to_string(cells));
  }
  return Grid(length, cells);
}

Field::Field(const Grid& grid, double fill) : grid_(grid), values_(grid.nodes(), fill) {}

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.nodes()) {
    throw Error(Errc::GridMismatch, "field has " + std::to_string(values_.size()) + " values, grid has " +
                                        std::to_string(grid_.nodes()) + " nodes");
  }
}

bool all_finite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

namespace {

void require_finite(const Field& f, const char* op) {
  if (!all_finite(f.values())) throw Error(Errc::NonFiniteInput, std::string(op) + " received a non-finite value");
}

}  // namespace

namespace kernels {

void d1_central(std::span<const double> f, double h, std::span<double> out) {
  const std::size_t n = f.size() - 1;
  const double inv2h = 0.5 / h;
  out[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2h;
  out[n] = 0.0;
}

void d2_neumann(std::span<const double> f, double h, std::span<double> out) {
  const std::size_t n = f.size() - 1;
  const double invh2 = 1.0 / (h * h);
  // Ghost nodes by even reflection: f_{-1} = f_1, f_{N+1} = f_{N-1}.
  out[0] = 2.0 * (f[1] - f[0]) * invh2;
  for (std::size_t i = 1; i < n; ++i) out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * invh2;
  out[n] = 2.0 * (f[n - 1] - f[n]) * invh2;
}

void add_div_flux(std::span<const double> coef, std::span<const double> f, double h, double scale,
                  std::span<double> out) {
  const std::size_t n = f.size() - 1;
  const double s = scale / (h * h);
  // Boundary nodes own a half cell with zero outer flux.
  double left = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double right = 0.5 * (coef[i] + coef[i + 1]) * (f[i + 1] - f[i]);
    out[i] += (i == 0 ? 2.0 * right : right - left) * s;
    left = right;
  }
  out[n] += -2.0 * left * s;
}

double quad_trapz(std::span<const double> f, double h) {
  const std::size_t n = f.size() - 1;
  double sum = 0.5 * (f[0] + f[n]);
  for (std::size_t i = 1; i < n; ++i) sum += f[i];
  return h * sum;
}

double norm_linf(std::span<const double> f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace kernels

Field d1_central(const Field& f) {
  require_finite(f, "d1_central");
  Field out(f.grid());
  kernels::d1_central(f.values(), f.grid().spacing(), out.mutable_values());
  return out;
}

Field d2_neumann(const Field& f) {
  require_finite(f, "d2_neumann");
  Field out(f.grid());
  kernels::d2_neumann(f.values(), f.grid().spacing(), out.mutable_values());
  return out;
}

Field div_flux_neumann(const Field& coef, const Field& f) {
  require_finite(coef, "div_flux_neumann");
  require_finite(f, "div_flux_neumann");
  if (!(coef.grid() == f.grid())) throw Error(Errc::GridMismatch, "coefficient and field live on different grids");
  for (double c : coef.values()) {
    if (!(c > 0.0)) throw Error(Errc::NonPositiveCoefficient, "flux coefficient must be strictly positive");
  }
  Field out(f.grid());
  kernels::add_div_flux(coef.values(), f.values(), f.grid().spacing(), 1.0, out.mutable_values());
  return out;
}

double quad_trapz(const Field& f) {
  require_finite(f, "quad_trapz");
  return kernels::quad_trapz(f.values(), f.grid().spacing());
}

double norm_linf(const Field& f) {
  require_finite(f, "norm_linf");
  return kernels::norm_linf(f.values());
}

double discrete_mode_eigenvalue(const Grid& grid, int k) {
  const double h = grid.spacing();
  const double s = std::sin(k * std::numbers::pi * h / (2.0 * grid.length()));
  return 4.0 / (h * h) * s * s;
}

}  // namespace mgt
