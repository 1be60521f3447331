#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mgt/errors.hpp"

namespace mgt {

// Uniform mesh on (0, L) with N cells and N+1 nodes x_i = i*h.
class Grid {
 public:
  Grid() = default;

  double length() const { return length_; }
  int cells() const { return cells_; }
  std::size_t nodes() const { return static_cast<std::size_t>(cells_) + 1; }
  double spacing() const { return spacing_; }
  double x(std::size_t i) const { return static_cast<double>(i) * spacing_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  friend Grid build_grid(double length, int cells);
  Grid(double length, int cells) : length_(length), cells_(cells), spacing_(length / cells) {}

  double length_ = 1.0;
  int cells_ = 8;
  double spacing_ = 0.125;
};

inline constexpr int kMinCells = 8;

/// Throws NonPositiveLength for L <= 0 and TooFewCells for N < 8.
Grid build_grid(double length, int cells);

/// Nodal values on a grid. The checked operators below reject non-finite entries.
class Field {
 public:
  Field() = default;
  explicit Field(const Grid& grid, double fill = 0.0);
  Field(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  // Raw access for in-place kernels. Callers are responsible for keeping values finite.
  std::span<double> mutable_values() { return values_; }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

template <class Fn>
Field sample(const Grid& grid, Fn&& fn) {
  std::vector<double> v(grid.nodes());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.x(i));
  return Field(grid, std::move(v));
}

bool all_finite(std::span<const double> values);

// Checked operators. Each throws NonFiniteInput when handed a non-finite field.
Field d1_central(const Field& f);
Field d2_neumann(const Field& f);
Field div_flux_neumann(const Field& coef, const Field& f);
double quad_trapz(const Field& f);
double norm_linf(const Field& f);

/// Exact eigenvalue of d2_neumann on the cosine mode cos(k*pi*x/L).
double discrete_mode_eigenvalue(const Grid& grid, int k);

namespace kernels {

// Unchecked span kernels used on the hot path. `out` must not alias `f`.
void d1_central(std::span<const double> f, double h, std::span<double> out);
void d2_neumann(std::span<const double> f, double h, std::span<double> out);
// Adds scale * (coef f_x)_x to out. Face coefficients are arithmetic means.
void add_div_flux(std::span<const double> coef, std::span<const double> f, double h, double scale,
                  std::span<double> out);
double quad_trapz(std::span<const double> f, double h);
double norm_linf(std::span<const double> f);

}  // namespace kernels

}  // namespace mgt
