#include "vexlp/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "fft_internal.hpp"

namespace vexlp {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Integer cell shift of h if h is a multiple of spacing (to 1e-9 relative),
// nullopt otherwise.
std::optional<long> cell_shift(double h, double spacing) {
  const double cells = h / spacing;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) <= 1e-9 * std::max(1.0, std::abs(cells)))
    return long(rounded);
  return std::nullopt;
}

std::vector<std::complex<double>> to_complex(const SampledFunction& f) {
  return std::vector<std::complex<double>>(f.values.begin(), f.values.end());
}

SampledFunction real_part(const Grid& grid,
                          const std::vector<std::complex<double>>& z,
                          double scale) {
  SampledFunction out;
  out.grid = grid;
  out.values.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    out.values[i] = scale * z[i].real();
  return out;
}

double relative_l2_diff(const SampledFunction& a, const SampledFunction& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    num += d * d;
    den += a.values[i] * a.values[i];
  }
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

}  // namespace

RadiiSet RadiiSet::dyadic(const Grid& grid) {
  RadiiSet set;
  double r = grid.spacing;
  while (r <= grid.half_width * (1 + 1e-12)) {
    set.radii.push_back(r);
    r *= 2.0;
  }
  return set;
}

SampledFunction translate(const SampledFunction& f,
                          const std::vector<double>& h,
                          std::optional<int> band_level) {
  const Grid& g = f.grid;
  if (int(h.size()) != g.dimension)
    throw std::invalid_argument("translate: offset dimension mismatch");
  const int n = g.points_per_axis;

  std::vector<long> shifts(h.size());
  bool aligned = true;
  for (std::size_t a = 0; a < h.size(); ++a) {
    auto s = cell_shift(h[a], g.spacing);
    if (!s) {
      aligned = false;
      break;
    }
    shifts[a] = ((*s % n) + n) % n;
  }

  if (aligned) {
    SampledFunction out;
    out.grid = g;
    out.values.resize(f.values.size());
    if (g.dimension == 1) {
      for (int j = 0; j < n; ++j)
        out.values[j] = f.values[(j + shifts[0]) % n];
    } else {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          out.values[std::size_t(a) * n + b] =
              f.values[std::size_t((a + shifts[0]) % n) * n +
                       (b + shifts[1]) % n];
    }
    return out;
  }

  if (!band_level)
    throw std::invalid_argument(
        "translate: non-cell-aligned offset requires a band-limited function "
        "with an explicit band level");
  const int v = *band_level;
  SampledFunction projected = bandlimit_project(f, v);
  if (relative_l2_diff(f, projected) > 1e-8)
    throw std::invalid_argument(
        "translate: function is not band-limited at the declared level");

  auto z = to_complex(f);
  detail::fft(z, g.dimension, n, /*forward=*/true);
  // f(x + h) picks up the phase e^{i xi . h} on the trig interpolant.
  if (g.dimension == 1) {
    for (int t = 0; t < n; ++t) {
      const double xi = kPi * detail::signed_wavenumber(t, n) / g.half_width;
      z[t] *= std::polar(1.0, xi * h[0]);
    }
  } else {
    for (int t1 = 0; t1 < n; ++t1) {
      const double xi1 = kPi * detail::signed_wavenumber(t1, n) / g.half_width;
      for (int t2 = 0; t2 < n; ++t2) {
        const double xi2 =
            kPi * detail::signed_wavenumber(t2, n) / g.half_width;
        z[std::size_t(t1) * n + t2] *=
            std::polar(1.0, xi1 * h[0] + xi2 * h[1]);
      }
    }
  }
  detail::fft(z, g.dimension, n, /*forward=*/false);
  const double scale = 1.0 / double(g.point_count());
  return real_part(g, z, scale);
}

double ball_average(const SampledFunction& f, std::size_t center_index,
                    const std::vector<double>& t, double r) {
  const Grid& g = f.grid;
  if (!(r >= g.spacing && r <= g.half_width + 1e-12))
    throw std::invalid_argument("ball_average: radius outside [spacing, L]");
  if (int(t.size()) != g.dimension)
    throw std::invalid_argument("ball_average: offset dimension mismatch");

  const int n = g.points_per_axis;
  int ci[2];
  g.axis_indices(center_index, ci);
  double center[2] = {g.coord(ci[0]) + t[0],
                      g.dimension == 2 ? g.coord(ci[1]) + t[1] : 0.0};

  // Candidate window: per-axis indices within r (+1 cell) of the center.
  const int reach = int(std::ceil(r / g.spacing)) + 1;
  auto axis_candidates = [&](double c) {
    const long base = std::lround((c + g.half_width) / g.spacing);
    std::vector<int> idx;
    idx.reserve(2 * reach + 1);
    for (long o = -reach; o <= reach; ++o) idx.push_back(int(((base + o) % n + n) % n));
    return idx;
  };

  // Nearest grid point is always included (open-ball convention would
  // otherwise give an empty set when the center sits on a grid point and
  // r equals the spacing exactly only through rounding).
  double sum = 0.0;
  std::size_t cnt = 0;
  double best_dist = 1e300;
  std::size_t nearest = center_index;

  auto visit = [&](std::size_t flat, double dist) {
    if (dist < best_dist) {
      best_dist = dist;
      nearest = flat;
    }
    if (dist < r) {
      sum += std::abs(f.values[flat]);
      ++cnt;
    }
  };

  if (g.dimension == 1) {
    for (int j : axis_candidates(center[0]))
      visit(std::size_t(j), g.periodic_axis_distance(g.coord(j), center[0]));
  } else {
    const auto rows = axis_candidates(center[0]);
    const auto cols = axis_candidates(center[1]);
    for (int a : rows) {
      const double da = g.periodic_axis_distance(g.coord(a), center[0]);
      for (int b : cols) {
        const double db = g.periodic_axis_distance(g.coord(b), center[1]);
        visit(std::size_t(a) * n + b, std::hypot(da, db));
      }
    }
  }
  if (cnt == 0) {
    sum = std::abs(f.values[nearest]);
    cnt = 1;
  }
  return sum / double(cnt);
}

SampledFunction hl_maximal(const SampledFunction& f, const RadiiSet& radii) {
  const Grid& g = f.grid;
  if (radii.radii.empty())
    throw std::invalid_argument("hl_maximal: empty radii set");
  const int n = g.points_per_axis;
  const std::size_t count = g.point_count();

  SampledFunction out;
  out.grid = g;
  out.values.assign(count, 0.0);

  // Grid-point-centered balls have a center-independent offset stencil.
  for (double r : radii.radii) {
    std::vector<std::size_t> offsets;
    if (g.dimension == 1) {
      for (int o = 0; o < n; ++o) {
        const double d = std::min(o, n - o) * g.spacing;
        if (d < r) offsets.push_back(std::size_t(o));
      }
    } else {
      for (int oa = 0; oa < n; ++oa) {
        const double da = std::min(oa, n - oa) * g.spacing;
        if (da >= r) continue;
        for (int ob = 0; ob < n; ++ob) {
          const double db = std::min(ob, n - ob) * g.spacing;
          if (std::hypot(da, db) < r)
            offsets.push_back(std::size_t(oa) * n + ob);
        }
      }
    }
    if (offsets.empty()) offsets.push_back(0);
    const double inv = 1.0 / double(offsets.size());

    if (g.dimension == 1) {
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t o : offsets) s += std::abs(f.values[(j + o) % n]);
        out.values[j] = std::max(out.values[j], s * inv);
      }
    } else {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          double s = 0.0;
          for (std::size_t o : offsets) {
            const int oa = int(o) / n, ob = int(o) % n;
            s += std::abs(
                f.values[std::size_t((a + oa) % n) * n + (b + ob) % n]);
          }
          out.values[std::size_t(a) * n + b] =
              std::max(out.values[std::size_t(a) * n + b],
                       s * inv);
        }
      }
    }
  }
  return out;
}

EtaKernel eta_kernel(const Grid& grid, int v, double m) {
  if (!(m > grid.dimension))
    throw std::invalid_argument("eta_kernel: m must exceed the dimension");
  if (v < 0) throw std::invalid_argument("eta_kernel: v must be >= 0");
  const double scale = std::ldexp(1.0, v);  // 2^v
  if (!(scale <= grid.points_per_axis / (2.0 * grid.half_width)))
    throw std::invalid_argument("eta_kernel: 2^v exceeds grid resolution");

  const double amp = grid.dimension == 1 ? scale : scale * scale;  // 2^{nv}
  auto val = [&](double r) { return amp * std::pow(1.0 + scale * r, -m); };
  EtaKernel k;
  k.v = v;
  k.m = m;
  k.samples = grid.dimension == 1
                  ? sample(grid, [&](double x) { return val(std::abs(x)); })
                  : sample(grid, [&](double x, double y) {
                      return val(std::hypot(x, y));
                    });
  k.mass = integrate(k.samples);
  if (grid.dimension == 1) {
    // 2 int_L^inf 2^v (1 + 2^v u)^{-m} du
    k.analytic_tail =
        2.0 * std::pow(1.0 + scale * grid.half_width, 1.0 - m) / (m - 1.0);
  }
  return k;
}

SampledFunction convolve(const SampledFunction& f, const SampledFunction& g) {
  if (!f.grid.same_as(g.grid))
    throw std::invalid_argument("convolve: grids differ");
  const Grid& grid = f.grid;
  const int n = grid.points_per_axis;

  auto zf = to_complex(f);
  auto zg = to_complex(g);
  detail::fft(zf, grid.dimension, n, true);
  detail::fft(zg, grid.dimension, n, true);

  // Index-space circular convolution lands at coordinate x - L (the grid
  // starts at -L); the extra (-1)^t per axis rotates by half a period.
  if (grid.dimension == 1) {
    for (int t = 0; t < n; ++t)
      zf[t] *= zg[t] * ((t & 1) ? -1.0 : 1.0);
  } else {
    for (int t1 = 0; t1 < n; ++t1)
      for (int t2 = 0; t2 < n; ++t2)
        zf[std::size_t(t1) * n + t2] *=
            zg[std::size_t(t1) * n + t2] * (((t1 + t2) & 1) ? -1.0 : 1.0);
  }
  detail::fft(zf, grid.dimension, n, false);

  double w = grid.spacing;
  if (grid.dimension == 2) w *= grid.spacing;
  return real_part(grid, zf, w / double(grid.point_count()));
}

bool bandlimit_admissible(const Grid& grid, int v) {
  return v >= 0 && std::ldexp(1.0, v + 1) < grid.nyquist();
}

SampledFunction bandlimit_project(const SampledFunction& f, int v) {
  const Grid& g = f.grid;
  if (!bandlimit_admissible(g, v))
    throw std::invalid_argument(
        "bandlimit_project: 2^{v+1} must stay below the Nyquist frequency");
  const int n = g.points_per_axis;
  const double cutoff = std::ldexp(1.0, v + 1);

  auto z = to_complex(f);
  detail::fft(z, g.dimension, n, true);
  if (g.dimension == 1) {
    for (int t = 0; t < n; ++t) {
      const double xi =
          kPi * std::abs(detail::signed_wavenumber(t, n)) / g.half_width;
      if (xi > cutoff) z[t] = 0.0;
    }
  } else {
    for (int t1 = 0; t1 < n; ++t1) {
      const double xi1 = kPi * detail::signed_wavenumber(t1, n) / g.half_width;
      for (int t2 = 0; t2 < n; ++t2) {
        const double xi2 =
            kPi * detail::signed_wavenumber(t2, n) / g.half_width;
        if (std::hypot(xi1, xi2) > cutoff) z[std::size_t(t1) * n + t2] = 0.0;
      }
    }
  }
  detail::fft(z, g.dimension, n, false);
  return real_part(g, z, 1.0 / double(g.point_count()));
}

RTrickResult r_trick_ratio(const SampledFunction& g, double r, double m,
                           int v) {
  if (!(r > 0)) throw std::invalid_argument("r_trick_ratio: r must be > 0");
  EtaKernel eta = eta_kernel(g.grid, v, m);

  SampledFunction powered = g;
  for (double& val : powered.values) val = std::pow(std::abs(val), r);
  SampledFunction conv = convolve(eta.samples, powered);

  double conv_max = 0.0;
  for (double c : conv.values) conv_max = std::max(conv_max, c);
  const double floor = conv_max * 1e-13;

  RTrickResult res;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const double den = conv.values[i];
    if (den <= floor) {
      ++res.skipped;
      continue;
    }
    const double ratio = std::abs(g.values[i]) / std::pow(den, 1.0 / r);
    res.ratio = std::max(res.ratio, ratio);
  }
  return res;
}

}  // namespace vexlp
