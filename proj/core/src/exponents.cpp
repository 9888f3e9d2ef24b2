#include "vexlp/exponents.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace vexlp {

namespace {

constexpr double kEuler = 2.71828182845904523536;
constexpr double kMinExponent = 0.1;
constexpr double kMaxExponent = 64.0;  // overflow guard for |f|^{p(x)}

ExponentField finish(SampledFunction samples, double p_infinity,
                     ExponentFamily family, bool plog_excluded) {
  ExponentField p;
  p.samples = std::move(samples);
  p.family = family;
  p.plog_excluded = plog_excluded;
  p.p_infinity = p_infinity;
  double lo = p.samples.values.front();
  double hi = lo;
  for (double v : p.samples.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(lo >= kMinExponent) || !(hi <= kMaxExponent))
    throw std::invalid_argument(
        "exponent samples must stay within [0.1, 64]");
  p.p_minus = lo;
  p.p_plus = hi;
  return p;
}

}  // namespace

bool ExponentField::has_p_infinity() const { return !std::isnan(p_infinity); }

ExponentField constant_exponent(const Grid& grid, double p0) {
  return finish(make_function(grid, p0), p0, ExponentFamily::Constant, false);
}

ExponentField smooth_bump_exponent(const Grid& grid, double p0,
                                   double amplitude, double width) {
  if (!(width > 0)) throw std::invalid_argument("bump width must be positive");
  auto bump1 = [&](double x) {
    return p0 + amplitude * std::exp(-x * x / (width * width));
  };
  SampledFunction s =
      grid.dimension == 1
          ? sample(grid, bump1)
          : sample(grid, [&](double x, double y) {
              return p0 + amplitude *
                              std::exp(-(x * x + y * y) / (width * width));
            });
  return finish(std::move(s), p0, ExponentFamily::SmoothBump, false);
}

ExponentField log_borderline_exponent(const Grid& grid, double p0, double a) {
  auto val = [&](double r) {
    if (r == 0.0) return p0;
    return p0 + a / std::log(kEuler + 1.0 / r);
  };
  SampledFunction s =
      grid.dimension == 1
          ? sample(grid, [&](double x) { return val(std::abs(x)); })
          : sample(grid,
                   [&](double x, double y) { return val(std::hypot(x, y)); });
  return finish(std::move(s), p0 + a, ExponentFamily::LogBorderline, false);
}

ExponentField step_exponent(const Grid& grid, double p_left, double p_right) {
  SampledFunction s =
      grid.dimension == 1
          ? sample(grid, [&](double x) { return x < 0 ? p_left : p_right; })
          : sample(grid, [&](double x, double) {
              return x < 0 ? p_left : p_right;
            });
  return finish(std::move(s), std::nan(""), ExponentFamily::Step, true);
}

ExponentField build_exponent(ExponentFamily family,
                             const std::vector<double>& params,
                             const Grid& grid) {
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      throw std::invalid_argument("wrong parameter count for exponent family");
  };
  switch (family) {
    case ExponentFamily::Constant:
      need(1);
      return constant_exponent(grid, params[0]);
    case ExponentFamily::SmoothBump:
      need(3);
      return smooth_bump_exponent(grid, params[0], params[1], params[2]);
    case ExponentFamily::LogBorderline:
      need(2);
      return log_borderline_exponent(grid, params[0], params[1]);
    case ExponentFamily::Step:
      need(2);
      return step_exponent(grid, params[0], params[1]);
  }
  throw std::invalid_argument("unknown exponent family");
}

std::string family_name(ExponentFamily family) {
  switch (family) {
    case ExponentFamily::Constant: return "constant";
    case ExponentFamily::SmoothBump: return "smooth_bump";
    case ExponentFamily::LogBorderline: return "log_borderline";
    case ExponentFamily::Step: return "step";
  }
  return "?";
}

namespace {

double pair_value(const SampledFunction& g, std::size_t i, std::size_t j) {
  const Grid& grid = g.grid;
  int a[2], b[2];
  grid.axis_indices(i, a);
  grid.axis_indices(j, b);
  double dx = grid.coord(a[0]) - grid.coord(b[0]);
  double dist = std::abs(dx);
  if (grid.dimension == 2) {
    double dy = grid.coord(a[1]) - grid.coord(b[1]);
    dist = std::hypot(dx, dy);
  }
  if (dist == 0.0) return 0.0;
  return std::abs(g.values[i] - g.values[j]) * std::log(kEuler + 1.0 / dist);
}

}  // namespace

double estimate_clog_local(const SampledFunction& g, std::size_t pair_budget,
                           std::uint64_t seed) {
  if (pair_budget < 1) throw std::invalid_argument("pair_budget must be >= 1");
  const Grid& grid = g.grid;
  const std::size_t count = grid.point_count();
  double best = 0.0;

  if (count <= 256) {
    for (std::size_t i = 0; i + 1 < count; ++i)
      for (std::size_t j = i + 1; j < count; ++j)
        best = std::max(best, pair_value(g, i, j));
    return best;
  }

  // Stratified by dyadic offset bands [2^k, 2^{k+1}) in cells along each
  // axis. Rounds visit the bands smallest first, so the pair sequence for a
  // smaller budget is a prefix of the sequence for a larger one.
  const int n = grid.points_per_axis;
  int bands = 0;
  while ((1 << (bands + 1)) <= n / 2) ++bands;
  ++bands;  // band 0 is offset 1 .. 1

  std::vector<std::mt19937_64> rng;
  rng.reserve(bands);
  for (int b = 0; b < bands; ++b)
    rng.emplace_back(seed * 0x9e3779b97f4a7c15ULL + 0x100 + b);

  std::size_t drawn = 0;
  while (drawn < pair_budget) {
    for (int b = 0; b < bands && drawn < pair_budget; ++b, ++drawn) {
      auto& r = rng[b];
      const int lo = 1 << b;
      const int hi = std::min(n / 2, (1 << (b + 1)) - 1);
      std::uniform_int_distribution<int> off_dist(lo, hi);
      std::uniform_int_distribution<std::size_t> base_dist(0, count - 1);
      std::uniform_int_distribution<int> sign_dist(0, 1);
      const std::size_t i = base_dist(r);
      int a[2];
      grid.axis_indices(i, a);
      int b0 = a[0], b1 = a[1];
      const int o0 = off_dist(r) * (sign_dist(r) ? 1 : -1);
      b0 = ((b0 + o0) % n + n) % n;
      if (grid.dimension == 2) {
        const int o1 = off_dist(r) * (sign_dist(r) ? 1 : -1);
        b1 = ((b1 + o1) % n + n) % n;
      }
      const std::size_t j = grid.dimension == 1
                                ? std::size_t(b0)
                                : std::size_t(b0) * n + std::size_t(b1);
      if (j != i) best = std::max(best, pair_value(g, i, j));
    }
  }
  return best;
}

double estimate_clog_decay(const SampledFunction& g, double g_infinity) {
  const std::size_t count = g.grid.point_count();
  double best = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double v = std::abs(g.values[i] - g_infinity) *
                     std::log(kEuler + g.grid.coord_norm(i));
    best = std::max(best, v);
  }
  return best;
}

LogHolderReport check_plog(const ExponentField& p, double threshold,
                           std::size_t pair_budget, std::uint64_t seed) {
  LogHolderReport rep;
  rep.pair_budget = pair_budget;

  SampledFunction recip = p.samples;
  for (double& v : recip.values) v = 1.0 / v;

  rep.clog_local_p = estimate_clog_local(p.samples, pair_budget, seed);
  rep.clog_local_recip = estimate_clog_local(recip, pair_budget, seed);
  if (p.has_p_infinity()) {
    rep.clog_decay_p = estimate_clog_decay(p.samples, p.p_infinity);
    rep.clog_decay_recip = estimate_clog_decay(recip, 1.0 / p.p_infinity);
  } else {
    rep.clog_decay_p = std::nan("");
    rep.clog_decay_recip = std::nan("");
  }
  rep.is_plog = !p.plog_excluded && p.has_p_infinity() &&
                rep.clog_local_recip <= threshold &&
                rep.clog_decay_recip <= threshold;
  return rep;
}

}  // namespace vexlp
