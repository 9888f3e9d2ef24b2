#include "vexlp/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>

#include "fft_internal.hpp"

namespace vexlp {

namespace detail {

namespace {
// FFTW planning is not thread-safe; execution of a ready plan is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

void fft(std::vector<std::complex<double>>& data, int dimension, int n,
         bool forward) {
  fftw_complex* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    const int sign = forward ? FFTW_FORWARD : FFTW_BACKWARD;
    const unsigned flags = FFTW_ESTIMATE | FFTW_PRESERVE_INPUT;
    plan = dimension == 1
               ? fftw_plan_dft_1d(n, buf, buf, sign, flags & ~FFTW_PRESERVE_INPUT)
               : fftw_plan_dft_2d(n, n, buf, buf, sign,
                                  flags & ~FFTW_PRESERVE_INPUT);
    if (!plan) throw std::runtime_error("fftw plan creation failed");
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
}

}  // namespace detail

std::size_t Grid::point_count() const {
  std::size_t c = std::size_t(points_per_axis);
  return dimension == 1 ? c : c * c;
}

void Grid::axis_indices(std::size_t flat, int out[2]) const {
  if (dimension == 1) {
    out[0] = int(flat);
    out[1] = 0;
  } else {
    out[0] = int(flat / std::size_t(points_per_axis));
    out[1] = int(flat % std::size_t(points_per_axis));
  }
}

double Grid::coord_norm(std::size_t flat) const {
  int ij[2];
  axis_indices(flat, ij);
  const double a = coord(ij[0]);
  if (dimension == 1) return std::abs(a);
  const double b = coord(ij[1]);
  return std::hypot(a, b);
}

double Grid::wrap_coord(double x) const {
  const double period = 2.0 * half_width;
  double y = std::fmod(x + half_width, period);
  if (y < 0) y += period;
  return y - half_width;
}

double Grid::periodic_axis_distance(double a, double b) const {
  const double period = 2.0 * half_width;
  double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

double Grid::nyquist() const {
  return 3.14159265358979323846 * points_per_axis / (2.0 * half_width);
}

bool Grid::same_as(const Grid& other) const {
  return dimension == other.dimension && half_width == other.half_width &&
         points_per_axis == other.points_per_axis;
}

Grid make_grid(int dimension, double half_width, int points_per_axis) {
  if (dimension != 1 && dimension != 2)
    throw std::invalid_argument("grid dimension must be 1 or 2");
  if (!(half_width > 0))
    throw std::invalid_argument("grid half_width must be positive");
  const int n = points_per_axis;
  if (n < 8 || (n & (n - 1)) != 0)
    throw std::invalid_argument(
        "grid points_per_axis must be a power of two >= 8");
  Grid g;
  g.dimension = dimension;
  g.half_width = half_width;
  g.points_per_axis = n;
  g.spacing = 2.0 * half_width / n;
  return g;
}

double SampledFunction::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

SampledFunction make_function(const Grid& grid, double fill) {
  SampledFunction f;
  f.grid = grid;
  f.values.assign(grid.point_count(), fill);
  return f;
}

double integrate(const SampledFunction& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  double w = f.grid.spacing;
  if (f.grid.dimension == 2) w *= f.grid.spacing;
  return w * s;
}

SpectralFunction dft(const SampledFunction& f) {
  const Grid& g = f.grid;
  const int n = g.points_per_axis;
  std::vector<std::complex<double>> z(f.values.begin(), f.values.end());
  detail::fft(z, g.dimension, n, /*forward=*/true);

  SpectralFunction out;
  out.grid = g;
  out.coefficients.resize(g.point_count());
  double scale = g.spacing / std::sqrt(2.0 * 3.14159265358979323846);
  if (g.dimension == 2) scale *= scale;

  // c_k = scale * (-1)^{k1+...} * A_{k mod N}, with k = m - N/2 per axis;
  // the sign comes from the grid starting at -L rather than 0.
  if (g.dimension == 1) {
    for (int m = 0; m < n; ++m) {
      const int k = m - n / 2;
      const double sgn = (k & 1) ? -1.0 : 1.0;
      out.coefficients[m] = scale * sgn * z[(k + n) % n];
    }
  } else {
    for (int m1 = 0; m1 < n; ++m1) {
      const int k1 = m1 - n / 2;
      for (int m2 = 0; m2 < n; ++m2) {
        const int k2 = m2 - n / 2;
        const double sgn = ((k1 + k2) & 1) ? -1.0 : 1.0;
        out.coefficients[std::size_t(m1) * n + m2] =
            scale * sgn *
            z[std::size_t((k1 + n) % n) * n + std::size_t((k2 + n) % n)];
      }
    }
  }
  return out;
}

SampledFunction idft(const SpectralFunction& F) {
  const Grid& g = F.grid;
  const int n = g.points_per_axis;
  if (F.coefficients.size() != g.point_count())
    throw std::invalid_argument("spectral coefficient count mismatch");

  std::vector<std::complex<double>> z(g.point_count());
  if (g.dimension == 1) {
    for (int m = 0; m < n; ++m) {
      const int k = m - n / 2;
      const double sgn = (k & 1) ? -1.0 : 1.0;
      z[(k + n) % n] = sgn * F.coefficients[m];
    }
  } else {
    for (int m1 = 0; m1 < n; ++m1) {
      const int k1 = m1 - n / 2;
      for (int m2 = 0; m2 < n; ++m2) {
        const int k2 = m2 - n / 2;
        const double sgn = ((k1 + k2) & 1) ? -1.0 : 1.0;
        z[std::size_t((k1 + n) % n) * n + std::size_t((k2 + n) % n)] =
            sgn * F.coefficients[std::size_t(m1) * n + m2];
      }
    }
  }
  detail::fft(z, g.dimension, n, /*forward=*/false);

  const double pi = 3.14159265358979323846;
  double scale = (pi / g.half_width) / std::sqrt(2.0 * pi);
  if (g.dimension == 2) scale *= scale;

  SampledFunction out;
  out.grid = g;
  out.values.resize(g.point_count());
  for (std::size_t j = 0; j < z.size(); ++j)
    out.values[j] = scale * z[j].real();
  return out;
}

}  // namespace vexlp
