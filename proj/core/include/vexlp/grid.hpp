#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace vexlp {

/// Uniform periodic discretization of the box [-L, L)^n, n in {1,2}.
/// points_per_axis is a power of two >= 8 and spacing * points_per_axis == 2L.
struct Grid {
  int dimension = 1;
  double half_width = 1.0;      // L
  int points_per_axis = 8;      // N
  double spacing = 0.25;        // 2L/N

  std::size_t point_count() const;

  /// Per-axis coordinate of cell j: x_j = -L + j*spacing.
  double coord(int j) const { return -half_width + j * spacing; }

  /// Per-axis index decomposition of a flattened (row-major) index.
  void axis_indices(std::size_t flat, int out[2]) const;

  /// Euclidean norm of the coordinate of a flattened index.
  double coord_norm(std::size_t flat) const;

  /// Periodic representative of a per-axis coordinate in [-L, L).
  double wrap_coord(double x) const;

  /// Periodic distance between two per-axis coordinates.
  double periodic_axis_distance(double a, double b) const;

  /// Nyquist frequency pi*N/(2L); band levels v must satisfy 2^{v+1} < this.
  double nyquist() const;

  bool same_as(const Grid& other) const;
};

Grid make_grid(int dimension, double half_width, int points_per_axis);

/// Real samples on a Grid, row-major over axes.
struct SampledFunction {
  Grid grid;
  std::vector<double> values;

  double max_abs() const;
};

SampledFunction make_function(const Grid& grid, double fill = 0.0);

/// Pointwise construction from a callable (x) -> double for n=1 or
/// (x, y) -> double for n=2.
template <class F>
SampledFunction sample(const Grid& grid, F&& fn) {
  SampledFunction out;
  out.grid = grid;
  out.values.resize(grid.point_count());
  const int n = grid.points_per_axis;
  if constexpr (std::is_invocable_v<F, double>) {
    if (grid.dimension != 1)
      throw std::invalid_argument("sample: unary callable needs a 1-d grid");
    for (int j = 0; j < n; ++j) out.values[j] = fn(grid.coord(j));
  } else {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        out.values[std::size_t(a) * n + b] = fn(grid.coord(a), grid.coord(b));
  }
  return out;
}

/// Fourier coefficients indexed per axis by m in [0, N), frequency
/// xi = pi*(m - N/2)/L.
struct SpectralFunction {
  Grid grid;
  std::vector<std::complex<double>> coefficients;

  /// Per-axis frequency of spectral index m.
  double frequency(int m) const {
    return 3.14159265358979323846 * (m - grid.points_per_axis / 2) /
           grid.half_width;
  }
};

/// Riemann quadrature: spacing^n * sum of samples.
double integrate(const SampledFunction& f);

/// Normalized transform (2pi)^{-n/2} integral e^{-i x.xi} f(x) dx sampled at
/// the grid frequencies; idft is its exact discrete inverse.
SpectralFunction dft(const SampledFunction& f);
SampledFunction idft(const SpectralFunction& F);

}  // namespace vexlp
