#pragma once

#include <string>
#include <vector>

#include "vexlp/exponents.hpp"
#include "vexlp/grid.hpp"
#include "vexlp/norms.hpp"
#include "vexlp/operators.hpp"

namespace vexlp {

/// Axis-aligned cube of whole cells: center and side must be cell-aligned.
struct Cube {
  std::vector<double> center;
  double side = 0.0;
};

/// Resolved cube geometry: flattened indices of its cells and the exact
/// discrete volume count * spacing^n.
struct CubeCells {
  std::vector<std::size_t> indices;
  double volume = 0.0;
};

CubeCells cube_cells(const Grid& grid, const Cube& cube);

/// Which log-Holder constant feeds gamma = exp(-4m * c). The theorem states
/// c_log(1/p); the translation proof uses c_log(p). Both are supported and
/// every record carries the choice.
enum class GammaVariant { ClogRecip, ClogP };

struct Theorem2Config {
  Cube cube;
  std::size_t x_index = 0;       // grid point inside the cube
  std::vector<double> h;         // cell-aligned offset
  double m = 2.0;
  GammaVariant gamma_variant = GammaVariant::ClogRecip;
  /// Scale f by 1/(norm + sup + tol) to enforce the smallness hypothesis.
  bool normalize = true;
  double norm_tol = 1e-10;
};

struct VerificationRecord {
  double lhs = 0.0;
  double rhs_m_term = 0.0;
  double rhs_decay_term = 0.0;
  double slack = 0.0;  // rhs - lhs; negative slack is recorded, not thrown
  bool hypothesis_violated = false;
  bool config_rejected = false;
};

/// Sharp averaging estimate over a cube: lhs ((gamma/|Q|) int_Q |f(y+h)|)^{p(x)}
/// against M int_Q |f(y+h)|^{p(y+h)} plus the (e+|.|)^{-m} decay terms.
VerificationRecord theorem2_check(const SampledFunction& f,
                                  const ExponentField& p,
                                  const LogHolderReport& rep,
                                  const Theorem2Config& cfg);

/// Variant for f in the intersection with the sup norm: the M factor drops
/// and gamma weakens to exp(-m c_log(1/p)).
VerificationRecord theorem2_strengthened_check(const SampledFunction& f,
                                               const ExponentField& p,
                                               const LogHolderReport& rep,
                                               const Theorem2Config& cfg);

/// Three-way split of f(y+h) over the cube (|f|>1; |f|<=1 with smaller
/// exponent; |f|<=1 with larger exponent) and the per-piece bounds.
struct DecompRecord {
  double I1 = 0.0, I2 = 0.0, I3 = 0.0;
  int i1_case = 0;  // 1: p(x) <= inf p(Q+h); 2/3: the two telescoping cases
  std::vector<double> q_values;
  std::vector<double> s_values;
  int steps_N = 1;
  double gamma = 0.0;
  bool partition_exact = false;
  double convexity_slack = 0.0;          // 3^{p+-1}(I1+I2+I3) - lhs
  double i1_pointwise_min_slack = 0.0;   // case 1: |f1|^{p(x)} <= |f1|^{p(y+h)}
  double i1_jensen_slack = 0.0;          // cases 2-3 Jensen step
  double telescope_slack = 0.0;          // N-step chain for |p(y0)-p(y0+h)|
  double i2_pointwise_min_slack = 0.0;
  double young_min_slack = 0.0;          // (g|f3|)^{p(x)} <= |f3|^{p(y+h)} + g^q
  bool s_skipped = false;                // p_infinity undefined
};

DecompRecord appendix_decomposition(const SampledFunction& f,
                                    const ExponentField& p,
                                    const LogHolderReport& rep,
                                    const Theorem2Config& cfg);

/// ||tau_h f|| / ||f||. Throws on f == 0. Non-aligned h requires band_level.
double translation_ratio(const SampledFunction& f, const ExponentField& p,
                         const std::vector<double>& h, double tol = 1e-10,
                         std::optional<int> band_level = std::nullopt);

/// exp((2 + 2^{vn} |h|) c_log(p)), saturated at 1e300.
double theorem3_envelope(int v, double h_norm, double clog_p, int dimension);

struct SweepRow {
  std::string exponent;
  int v = 0;
  double h = 0.0;
  double max_ratio = 0.0;
  double envelope = 0.0;
  double fitted_c = 0.0;  // max_ratio / envelope
};

std::vector<SweepRow> sweep_translation_bound(
    const std::vector<ExponentField>& exponents,
    const std::vector<LogHolderReport>& reports, const std::vector<int>& vs,
    const std::vector<double>& hs, const std::vector<SampledFunction>& corpus,
    double tol = 1e-10);

/// ||f*g|| against ||exp((2+2^{vn}|.|) c_log(p)) g||_1 ||f||; f is projected
/// to band level v first. Overflow in the weighted norm rejects the config.
VerificationRecord convolution_corollary_check(const SampledFunction& f,
                                               const SampledFunction& g,
                                               const ExponentField& p,
                                               const LogHolderReport& rep,
                                               int v, double tol = 1e-10);

struct GrowthRow {
  double clip_level = 0.0;
  double ratio = 0.0;
  /// False when the clip level exceeds the largest representable sample of
  /// x^{-1/4} on this grid, i.e. the clip has no effect.
  bool clip_resolved = true;
};

/// Translation ratios of clipped power laws f_k = min(x^{-1/4} chi_(0,1), k)
/// under the given exponent and cell-aligned offset h.
std::vector<GrowthRow> counterexample_growth(const ExponentField& p, double h,
                                             const std::vector<double>& clip_levels,
                                             double tol = 1e-10);

}  // namespace vexlp
