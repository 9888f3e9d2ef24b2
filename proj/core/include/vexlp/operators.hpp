#pragma once

#include <optional>
#include <vector>

#include "vexlp/grid.hpp"

namespace vexlp {

/// Sampled dyadic kernel eta_{v,m}(x) = 2^{nv} (1 + 2^v |x|)^{-m} with its
/// quadrature mass over the box. analytic_tail is the closed-form mass of
/// the continuum kernel outside the box (dimension 1 only; 0 for n=2).
struct EtaKernel {
  int v = 0;
  double m = 0.0;
  SampledFunction samples;
  double mass = 0.0;
  double analytic_tail = 0.0;
};

struct RadiiSet {
  std::vector<double> radii;  // strictly increasing, in [spacing, L]

  /// Dyadic default {spacing * 2^k : k = 0 .. log2(N/2)}.
  static RadiiSet dyadic(const Grid& grid);
};

/// Periodic translation (tau_h f)(y) = f(y + h). Cell-aligned offsets are an
/// exact sample permutation. A non-aligned offset requires band_level: the
/// function must be band-limited at that level (checked), and the shift is
/// applied as a spectral phase. Anything else is an error; no interpolation.
SampledFunction translate(const SampledFunction& f,
                          const std::vector<double>& h,
                          std::optional<int> band_level = std::nullopt);

/// Mean of |f| over the grid points of the periodic open ball B(x + t, r);
/// the grid point nearest the center is always included.
double ball_average(const SampledFunction& f, std::size_t center_index,
                    const std::vector<double>& t, double r);

/// Discrete maximal operator: pointwise max of centered ball averages over
/// the given radii set.
SampledFunction hl_maximal(const SampledFunction& f, const RadiiSet& radii);

EtaKernel eta_kernel(const Grid& grid, int v, double m);

/// Periodic convolution with quadrature weight spacing^n, aligned so that
/// the output is sampled at the grid coordinates.
SampledFunction convolve(const SampledFunction& f, const SampledFunction& g);

/// Zeroes every Fourier coefficient with |xi| > 2^{v+1}; idempotent.
/// Requires 2^{v+1} < pi*N/(2L).
SampledFunction bandlimit_project(const SampledFunction& f, int v);

bool bandlimit_admissible(const Grid& grid, int v);

struct RTrickResult {
  double ratio = 0.0;       // sup over grid of |g| / (eta * |g|^r)^{1/r}
  std::size_t skipped = 0;  // points where the denominator vanished
};

RTrickResult r_trick_ratio(const SampledFunction& g, double r, double m,
                           int v);

}  // namespace vexlp
