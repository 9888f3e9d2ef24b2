#pragma once

#include <cstdint>
#include <string>

#include "vexlp/grid.hpp"

namespace vexlp {

enum class ExponentFamily { Constant, SmoothBump, LogBorderline, Step };

/// A sampled exponent p(.) with cached essential bounds. p_infinity is NaN
/// when the family has no limit at infinity (the step family).
struct ExponentField {
  SampledFunction samples;
  double p_minus = 0.0;
  double p_plus = 0.0;
  double p_infinity = 0.0;
  ExponentFamily family = ExponentFamily::Constant;
  /// Step exponents are flagged by construction: on a finite grid every
  /// sampled function has finite log-Holder constants, so the dichotomy is
  /// preserved through this flag rather than through the estimator alone.
  bool plog_excluded = false;

  bool has_p_infinity() const;
};

ExponentField constant_exponent(const Grid& grid, double p0);
/// p(x) = p0 + amplitude * exp(-|x|^2 / width^2); p_infinity = p0.
ExponentField smooth_bump_exponent(const Grid& grid, double p0,
                                   double amplitude, double width);
/// p(x) = p0 + a / ln(e + 1/|x|), p(0) = p0; p_infinity = p0 + a.
ExponentField log_borderline_exponent(const Grid& grid, double p0, double a);
/// p = p_left where the first coordinate is < 0, p_right otherwise.
/// Not in P^log; p_infinity undefined.
ExponentField step_exponent(const Grid& grid, double p_left, double p_right);

ExponentField build_exponent(ExponentFamily family,
                             const std::vector<double>& params,
                             const Grid& grid);

std::string family_name(ExponentFamily family);

/// Estimated constants for the local log-Holder condition and the decay
/// condition, for both p and 1/p.
struct LogHolderReport {
  double clog_local_p = 0.0;
  double clog_local_recip = 0.0;
  double clog_decay_p = 0.0;
  double clog_decay_recip = 0.0;
  bool is_plog = false;
  std::size_t pair_budget = 0;
};

/// Supremum over sampled pairs of |g(x)-g(y)| * ln(e + 1/|x-y|).
/// All pairs when the grid has <= 256 points; otherwise a deterministic
/// stratified subsample of pair_budget pairs, biased toward small |x-y|.
/// Nested in pair_budget: a larger budget extends the same pair sequence.
double estimate_clog_local(const SampledFunction& g, std::size_t pair_budget,
                           std::uint64_t seed = 0);

/// Max over grid points of |g(x) - g_infinity| * ln(e + |x|).
double estimate_clog_decay(const SampledFunction& g, double g_infinity);

LogHolderReport check_plog(const ExponentField& p, double threshold,
                           std::size_t pair_budget, std::uint64_t seed = 0);

}  // namespace vexlp
