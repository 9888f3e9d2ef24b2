#include "vexlp/verifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vexlp {

namespace {

constexpr double kEuler = 2.71828182845904523536;
constexpr double kSaturate = 1e300;

double vec_norm(const std::vector<double>& h) {
  double s = 0.0;
  for (double x : h) s += x * x;
  return std::sqrt(s);
}

double cell_weight(const Grid& g) {
  return g.dimension == 1 ? g.spacing : g.spacing * g.spacing;
}

struct CubeData {
  CubeCells cells;
  std::size_t x_index;
  double px;            // p(x)
  SampledFunction tf;   // f(y+h) samples (normalized when requested)
  SampledFunction tp;   // p(y+h) samples
  double gamma;
  double big_m;
  double theta;
  double h_norm;
  bool hypothesis_violated;
};

CubeData prepare(const SampledFunction& f, const ExponentField& p,
                 const LogHolderReport& rep, const Theorem2Config& cfg,
                 double gamma_clog_factor, GammaVariant variant,
                 bool use_big_m) {
  if (!f.grid.same_as(p.samples.grid))
    throw std::invalid_argument("theorem2: f and p on different grids");
  CubeData d;
  d.cells = cube_cells(f.grid, cfg.cube);
  d.x_index = cfg.x_index;
  if (std::find(d.cells.indices.begin(), d.cells.indices.end(), cfg.x_index) ==
      d.cells.indices.end())
    throw std::invalid_argument("theorem2: x must lie in the cube");
  d.px = p.samples.values[cfg.x_index];
  d.h_norm = vec_norm(cfg.h);

  SampledFunction nf = f;
  if (cfg.normalize) {
    const double norm = luxemburg_norm(f, p, cfg.norm_tol).value;
    const double sup = f.max_abs();
    const double scale = norm + sup + cfg.norm_tol;
    for (double& v : nf.values) v /= scale;
  }
  d.tf = translate(nf, cfg.h);
  d.tp = translate(p.samples, cfg.h);

  const double clog = variant == GammaVariant::ClogRecip
                          ? rep.clog_local_recip
                          : rep.clog_local_p;
  d.gamma = std::exp(-gamma_clog_factor * cfg.m * clog);
  d.theta = 2.0 + d.h_norm / d.cells.volume;
  d.big_m = 1.0;
  if (use_big_m && d.cells.volume < std::min(d.h_norm, 1.0))
    d.big_m = std::exp((2.0 + d.h_norm / d.cells.volume) * rep.clog_local_p /
                       p.p_minus);
  d.hypothesis_violated = !rep.is_plog;
  return d;
}

VerificationRecord run_theorem2(const SampledFunction& f,
                                const ExponentField& p,
                                const LogHolderReport& rep,
                                const Theorem2Config& cfg,
                                double gamma_clog_factor, GammaVariant variant,
                                bool use_big_m) {
  CubeData d =
      prepare(f, p, rep, cfg, gamma_clog_factor, variant, use_big_m);
  const Grid& g = f.grid;
  const double w = cell_weight(g);

  double int_abs = 0.0;      // int_Q |f(y+h)| dy
  double int_pow = 0.0;      // int_Q |f(y+h)|^{p(y+h)} dy
  double int_decay = 0.0;    // int_Q (e+|y+h|)^{-m} dy
  for (std::size_t idx : d.cells.indices) {
    const double a = std::abs(d.tf.values[idx]);
    int_abs += a;
    if (a > 0.0) int_pow += std::pow(a, d.tp.values[idx]);
    int ij[2];
    g.axis_indices(idx, ij);
    double y0 = g.wrap_coord(g.coord(ij[0]) + cfg.h[0]);
    double ynorm = std::abs(y0);
    if (g.dimension == 2) {
      double y1 = g.wrap_coord(g.coord(ij[1]) + cfg.h[1]);
      ynorm = std::hypot(y0, y1);
    }
    int_decay += std::pow(kEuler + ynorm, -cfg.m);
  }
  int_abs *= w;
  int_pow *= w;
  int_decay *= w;

  VerificationRecord rec;
  const double avg = d.gamma / d.cells.volume * int_abs;
  rec.lhs = avg > 0.0 ? std::pow(avg, d.px) : 0.0;
  // The displayed theorem drops the 1/|Q| on this term; the appendix proof
  // (and the constant-p Jensen reduction) require the cube average.
  rec.rhs_m_term = d.big_m * int_pow / d.cells.volume;
  const double xnorm = g.coord_norm(d.x_index);
  rec.rhs_decay_term =
      std::min(1.0, std::pow(d.cells.volume, cfg.m / d.theta)) *
      (std::pow(kEuler + xnorm, -cfg.m) + int_decay / d.cells.volume);
  rec.slack = rec.rhs_m_term + rec.rhs_decay_term - rec.lhs;
  rec.hypothesis_violated = d.hypothesis_violated;
  return rec;
}

}  // namespace

CubeCells cube_cells(const Grid& grid, const Cube& cube) {
  if (int(cube.center.size()) != grid.dimension)
    throw std::invalid_argument("cube center dimension mismatch");
  const int n = grid.points_per_axis;
  const double d = grid.spacing;
  const double cells_f = cube.side / d;
  const long cells = std::lround(cells_f);
  if (cells < 1 || cells > n ||
      std::abs(cells_f - double(cells)) > 1e-9 * std::max(1.0, cells_f))
    throw std::invalid_argument("cube side must be a whole number of cells");

  std::vector<std::vector<int>> axis_idx(grid.dimension);
  for (int a = 0; a < grid.dimension; ++a) {
    const double start = cube.center[a] - cube.side / 2.0;
    const double start_f = (start + grid.half_width) / d;
    const long s = std::lround(start_f);
    if (std::abs(start_f - double(s)) > 1e-9 * std::max(1.0, std::abs(start_f)))
      throw std::invalid_argument("cube must be aligned to cell boundaries");
    for (long i = 0; i < cells; ++i)
      axis_idx[a].push_back(int(((s + i) % n + n) % n));
  }

  CubeCells out;
  if (grid.dimension == 1) {
    for (int j : axis_idx[0]) out.indices.push_back(std::size_t(j));
    out.volume = double(cells) * d;
  } else {
    for (int a : axis_idx[0])
      for (int b : axis_idx[1])
        out.indices.push_back(std::size_t(a) * n + b);
    out.volume = double(cells) * d * double(cells) * d;
  }
  return out;
}

VerificationRecord theorem2_check(const SampledFunction& f,
                                  const ExponentField& p,
                                  const LogHolderReport& rep,
                                  const Theorem2Config& cfg) {
  return run_theorem2(f, p, rep, cfg, 4.0, cfg.gamma_variant, true);
}

VerificationRecord theorem2_strengthened_check(const SampledFunction& f,
                                               const ExponentField& p,
                                               const LogHolderReport& rep,
                                               const Theorem2Config& cfg) {
  return run_theorem2(f, p, rep, cfg, 1.0, GammaVariant::ClogRecip, false);
}

DecompRecord appendix_decomposition(const SampledFunction& f,
                                    const ExponentField& p,
                                    const LogHolderReport& rep,
                                    const Theorem2Config& cfg) {
  CubeData d = prepare(f, p, rep, cfg, 4.0, cfg.gamma_variant, true);
  const Grid& g = f.grid;
  const double w = cell_weight(g);
  const double px = d.px;
  const double gamma = d.gamma;
  const std::size_t m_cells = d.cells.indices.size();

  DecompRecord rec;
  rec.gamma = gamma;

  // Partition of f(y+h) over Q.
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  double p_minus_q = std::numeric_limits<double>::infinity();
  double p_minus_qh = std::numeric_limits<double>::infinity();
  rec.partition_exact = true;
  for (std::size_t idx : d.cells.indices) {
    const double fy = d.tf.values[idx];
    const double py = d.tp.values[idx];
    p_minus_q = std::min(p_minus_q, p.samples.values[idx]);
    p_minus_qh = std::min(p_minus_qh, py);
    double f1 = 0.0, f2 = 0.0, f3 = 0.0;
    if (std::abs(fy) > 1.0)
      f1 = fy;
    else if (py <= px)
      f2 = fy;
    else
      f3 = fy;
    if (f1 + f2 + f3 != fy) rec.partition_exact = false;
    s1 += std::abs(f1);
    s2 += std::abs(f2);
    s3 += std::abs(f3);
  }
  auto part_term = [&](double s) {
    const double avg = gamma / d.cells.volume * (w * s);
    return avg > 0.0 ? std::pow(avg, px) : 0.0;
  };
  rec.I1 = part_term(s1);
  rec.I2 = part_term(s2);
  rec.I3 = part_term(s3);

  const double total = part_term(s1 + s2 + s3);
  rec.convexity_slack =
      std::pow(3.0, p.p_plus - 1.0) * (rec.I1 + rec.I2 + rec.I3) - total;

  // I1 case tag.
  if (px <= p_minus_qh)
    rec.i1_case = 1;
  else if (p_minus_qh >= p_minus_q)
    rec.i1_case = 2;
  else
    rec.i1_case = 3;

  // Per-case bounds.
  double i1_pw = std::numeric_limits<double>::infinity();
  double i2_pw = std::numeric_limits<double>::infinity();
  double young = std::numeric_limits<double>::infinity();
  double int_f1_base = 0.0;
  const double jensen_base = rec.i1_case == 3 ? p_minus_qh : p_minus_q;
  for (std::size_t idx : d.cells.indices) {
    const double fy = std::abs(d.tf.values[idx]);
    const double py = d.tp.values[idx];
    if (fy > 1.0) {
      if (rec.i1_case == 1)
        i1_pw = std::min(i1_pw, std::pow(fy, py) - std::pow(fy, px));
      int_f1_base += std::pow(fy, jensen_base);
    } else if (fy > 0.0 && py > px) {
      // Young split of (gamma |f3|)^{p(x)}.
      const double inv_q = std::max(1.0 / px - 1.0 / py, 0.0);
      double gq;
      if (inv_q == 0.0)
        gq = gamma < 1.0 ? 0.0 : 1.0;
      else
        gq = std::pow(gamma, 1.0 / inv_q);
      young = std::min(young,
                       std::pow(fy, py) + gq - std::pow(gamma * fy, px));
    } else if (fy > 0.0) {
      i2_pw = std::min(i2_pw, std::pow(fy, py) - std::pow(fy, px));
    }
  }
  rec.i1_pointwise_min_slack = std::isinf(i1_pw) ? 0.0 : i1_pw;
  rec.i2_pointwise_min_slack = std::isinf(i2_pw) ? 0.0 : i2_pw;
  rec.young_min_slack = std::isinf(young) ? 0.0 : young;
  if (rec.i1_case != 1 && s1 > 0.0) {
    const double avg_base = gamma / d.cells.volume * (w * int_f1_base);
    rec.i1_jensen_slack =
        (avg_base > 0.0 ? std::pow(avg_base, px / jensen_base) : 0.0) - rec.I1;
  }

  // Telescoping chain for |p(y0) - p(y0+h)| at the minimizer of p(.+h).
  const double h_norm = d.h_norm;
  rec.steps_N = h_norm > d.cells.volume
                    ? int(std::floor(h_norm / d.cells.volume)) + 1
                    : 1;
  {
    std::size_t y0 = d.cells.indices.front();
    for (std::size_t idx : d.cells.indices)
      if (d.tp.values[idx] < d.tp.values[y0]) y0 = idx;
    auto p_at_offset = [&](double frac) {
      // p(y0 + frac*h), intermediate points rounded to the nearest cell.
      int ij[2];
      g.axis_indices(y0, ij);
      const int n = g.points_per_axis;
      long j0 = ij[0] + std::lround(frac * cfg.h[0] / g.spacing);
      j0 = ((j0 % n) + n) % n;
      if (g.dimension == 1) return p.samples.values[std::size_t(j0)];
      long j1 = ij[1] + std::lround(frac * cfg.h[1] / g.spacing);
      j1 = ((j1 % n) + n) % n;
      return p.samples.values[std::size_t(j0) * n + std::size_t(j1)];
    };
    double chain = 0.0;
    for (int i = 0; i < rec.steps_N; ++i)
      chain += std::abs(p_at_offset(double(i) / rec.steps_N) -
                        p_at_offset(double(i + 1) / rec.steps_N));
    rec.telescope_slack = chain - std::abs(p_at_offset(0.0) - p_at_offset(1.0));
  }

  // Sampled q and s values.
  const std::size_t stride = std::max<std::size_t>(1, m_cells / 32);
  rec.s_skipped = !p.has_p_infinity();
  for (std::size_t i = 0; i < m_cells; i += stride) {
    const std::size_t idx = d.cells.indices[i];
    const double py = d.tp.values[idx];
    const double inv_q = std::max(1.0 / px - 1.0 / py, 0.0);
    rec.q_values.push_back(inv_q == 0.0
                               ? std::numeric_limits<double>::infinity()
                               : 1.0 / inv_q);
    if (!rec.s_skipped) {
      const double inv_s = std::abs(1.0 / py - 1.0 / p.p_infinity);
      rec.s_values.push_back(inv_s == 0.0
                                 ? std::numeric_limits<double>::infinity()
                                 : 1.0 / inv_s);
    }
  }
  return rec;
}

double translation_ratio(const SampledFunction& f, const ExponentField& p,
                         const std::vector<double>& h, double tol,
                         std::optional<int> band_level) {
  if (f.max_abs() == 0.0)
    throw std::invalid_argument("translation_ratio: f is identically zero");
  const double denom = luxemburg_norm(f, p, tol).value;
  SampledFunction tf = translate(f, h, band_level);
  const double numer = luxemburg_norm(tf, p, tol).value;
  return numer / denom;
}

double theorem3_envelope(int v, double h_norm, double clog_p, int dimension) {
  if (v < 0) throw std::invalid_argument("theorem3_envelope: v must be >= 0");
  const double scale = std::ldexp(1.0, v * dimension);  // 2^{vn}
  const double expo = (2.0 + scale * h_norm) * clog_p;
  if (expo >= std::log(kSaturate)) return kSaturate;
  return std::exp(expo);
}

std::vector<SweepRow> sweep_translation_bound(
    const std::vector<ExponentField>& exponents,
    const std::vector<LogHolderReport>& reports, const std::vector<int>& vs,
    const std::vector<double>& hs, const std::vector<SampledFunction>& corpus,
    double tol) {
  if (exponents.size() != reports.size())
    throw std::invalid_argument("sweep: exponents/reports size mismatch");
  std::vector<SweepRow> rows;
  for (std::size_t e = 0; e < exponents.size(); ++e) {
    const ExponentField& p = exponents[e];
    const int dim = p.samples.grid.dimension;
    for (int v : vs) {
      // Band-limit the corpus once per level.
      std::vector<SampledFunction> banded;
      for (const auto& f : corpus) {
        SampledFunction fb = bandlimit_project(f, v);
        if (fb.max_abs() > 0.0) banded.push_back(std::move(fb));
      }
      for (double h : hs) {
        std::vector<double> offset(dim, 0.0);
        offset[0] = h;
        SweepRow row;
        row.exponent = family_name(p.family);
        row.v = v;
        row.h = h;
        for (const auto& fb : banded)
          row.max_ratio = std::max(
              row.max_ratio, translation_ratio(fb, p, offset, tol, v));
        row.envelope =
            theorem3_envelope(v, std::abs(h), reports[e].clog_local_p, dim);
        row.fitted_c = row.max_ratio / row.envelope;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

VerificationRecord convolution_corollary_check(const SampledFunction& f,
                                               const SampledFunction& g,
                                               const ExponentField& p,
                                               const LogHolderReport& rep,
                                               int v, double tol) {
  if (!f.grid.same_as(g.grid) || !f.grid.same_as(p.samples.grid))
    throw std::invalid_argument("convolution_corollary: grid mismatch");
  VerificationRecord rec;
  const Grid& grid = f.grid;
  const double scale = std::ldexp(1.0, v * grid.dimension);
  const double w = cell_weight(grid);

  double weighted = 0.0;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const double expo = (2.0 + scale * grid.coord_norm(i)) * rep.clog_local_p;
    if (expo >= std::log(kSaturate)) {
      rec.config_rejected = true;
      return rec;
    }
    weighted += std::exp(expo) * std::abs(g.values[i]);
  }
  weighted *= w;

  SampledFunction fb = bandlimit_project(f, v);
  if (fb.max_abs() == 0.0)
    throw std::invalid_argument("convolution_corollary: band-limited f is 0");
  const double fnorm = luxemburg_norm(fb, p, tol).value;
  rec.lhs = luxemburg_norm(convolve(fb, g), p, tol).value;
  rec.rhs_m_term = weighted * fnorm;
  rec.slack = rec.rhs_m_term - rec.lhs;
  rec.hypothesis_violated = !rep.is_plog;
  return rec;
}

std::vector<GrowthRow> counterexample_growth(
    const ExponentField& p, double h, const std::vector<double>& clip_levels,
    double tol) {
  const Grid& grid = p.samples.grid;
  if (grid.dimension != 1)
    throw std::invalid_argument("counterexample_growth: 1-d only");

  SampledFunction base = sample(grid, [](double x) {
    return (x > 0.0 && x < 1.0) ? std::pow(x, -0.25) : 0.0;
  });
  const double max_sample = base.max_abs();

  std::vector<GrowthRow> rows;
  for (double k : clip_levels) {
    if (!(k > 0)) throw std::invalid_argument("clip level must be positive");
    SampledFunction fk = base;
    for (double& v : fk.values) v = std::min(v, k);
    GrowthRow row;
    row.clip_level = k;
    row.clip_resolved = k <= max_sample;
    row.ratio = translation_ratio(fk, p, {h}, tol);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace vexlp
