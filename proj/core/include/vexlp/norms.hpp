#pragma once

#include <optional>

#include "vexlp/exponents.hpp"
#include "vexlp/grid.hpp"

namespace vexlp {

/// Modular integral of |f(x)|^{p(x)}, with 0^p := 0. Returns nullopt when
/// any integrand sample exceeds 1e300 (out of range, never Inf).
std::optional<double> modular(const SampledFunction& f,
                              const ExponentField& p);

struct NormResult {
  double value = 0.0;
  double modular_at_value = 0.0;
  int bisection_iterations = 0;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
};

/// Luxemburg (quasi-)norm inf{mu > 0 : modular(f/mu) <= 1} by bisection on
/// the monotone map mu -> modular(f/mu). tol is the allowed residual of the
/// modular at the returned value. p_minus < 1 (quasi-norm case) is allowed.
NormResult luxemburg_norm(const SampledFunction& f, const ExponentField& p,
                          double tol = 1e-10);

struct UnitBallReport {
  bool agrees = false;
  double modular_value = 0.0;
  double norm_value = 0.0;
  /// Distance of each side from the unit threshold.
  double modular_slack = 0.0;
  double norm_slack = 0.0;
};

/// Checks the equivalence modular(f) <= 1 iff norm(f) <= 1, with tol slack
/// on both comparisons.
UnitBallReport unit_ball_check(const SampledFunction& f,
                               const ExponentField& p, double tol = 1e-9);

}  // namespace vexlp
