// Acceptance gate: one line per criterion, exit 0 only if all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vexlp/harness.hpp"
#include "vexlp/norms.hpp"
#include "vexlp/operators.hpp"
#include "vexlp/verifiers.hpp"

using namespace vexlp;
namespace fs = std::filesystem;

namespace {

// Frozen oracle values for the counterexample family on grid(1, 2, 2^16),
// p = 8 on x<0 / 2 on x>=0, h = 1/2 (independent scalar-bisection oracle).
const std::vector<std::pair<double, double>> kGrowthOracle = {
    {2, 1.1956639225},  {4, 1.5906758175},  {8, 2.1917975689},
    {10, 2.4070680462}, {16, 2.5530440407}, {1000, 2.5530440407}};
constexpr double kGrowthSaturated = 1.0606447311;  // ratio(1000)/ratio(10)
constexpr double kGrowthResolved = 1.8331217725;   // ratio(8)/ratio(2)

// Regression baselines frozen from the first verified run (measured spread
// 1.10335, fitted_c range [0.0102285, 0.36508]; runs are deterministic).
constexpr double kRTrickSpreadMax = 1.15;
constexpr double kFittedCMin = 0.009;
constexpr double kFittedCMax = 0.41;

int failures = 0;

void report(int idx, bool ok, const std::string& what,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", idx,
              what.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

SampledFunction noise(const Grid& g, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, scale);
  auto f = make_function(g);
  for (auto& v : f.values) v = dist(rng);
  return f;
}

std::vector<SampledFunction> mixed_corpus(const Grid& g, std::size_t count) {
  std::vector<SampledFunction> out;
  for (std::size_t i = 0; i < count; ++i) {
    switch (i % 3) {
      case 0:
        out.push_back(noise(g, 1000 + i, 0.5 + 0.2 * double(i)));
        break;
      case 1: {
        const double c = -2.0 + 0.3 * double(i), w = 0.3 + 0.1 * double(i);
        out.push_back(sample(g, [&](double x) {
          return std::exp(-(x - c) * (x - c) / (w * w));
        }));
        break;
      }
      default: {
        const double a = -1.0 + 0.2 * double(i);
        out.push_back(sample(g, [&](double x) {
          return x >= a && x < a + 1.0 ? 1.0 + 0.1 * double(i) : 0.0;
        }));
      }
    }
  }
  return out;
}

// --- criterion 1: constant-exponent norms against classical L^p ---

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Grid g = make_grid(1, 4.0, 4096);
  auto corpus = mixed_corpus(g, 20);
  double worst = 0.0;
  for (double p0 : {1.0, 2.0, 4.0}) {
    auto p = constant_exponent(g, p0);
    for (const auto& f : corpus) {
      double acc = 0.0;
      for (double v : f.values) acc += std::pow(std::abs(v), p0);
      const double classical = std::pow(g.spacing * acc, 1.0 / p0);
      const double lux = luxemburg_norm(f, p, 1e-12).value;
      worst = std::max(worst, std::abs(lux - classical) / classical);
    }
  }
  const double el = seconds_since(t0);
  report(1, worst <= 1e-8 && el < 10.0,
         "constant-exponent norms match classical L^p",
         "max rel err " + fmt(worst) + ", " + fmt(el) + "s");
}

// --- criterion 2: unit ball property ---

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  Grid g = make_grid(1, 4.0, 1024);
  auto p = smooth_bump_exponent(g, 2.0, 1.0, 1.0);
  auto pb = log_borderline_exponent(g, 2.0, 0.5);
  int agreed = 0, total = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto f = noise(g, 2000 + s, 0.05 + 0.03 * double(s));
    const auto& pp = (s % 2) ? p : pb;
    ++total;
    if (unit_ball_check(f, pp, 1e-9).agrees) ++agreed;
  }
  const double el = seconds_since(t0);
  report(2, agreed == total && el < 30.0,
         "modular and norm unit balls coincide",
         std::to_string(agreed) + "/" + std::to_string(total) + ", " +
             fmt(el) + "s");
}

// --- criterion 3: homogeneity, including the quasi-norm range ---

void criterion3() {
  Grid g = make_grid(1, 4.0, 1024);
  std::vector<ExponentField> ps = {constant_exponent(g, 0.5),
                                   smooth_bump_exponent(g, 2.0, 1.0, 1.0),
                                   log_borderline_exponent(g, 2.0, 0.5)};
  double worst = 0.0;
  for (const auto& p : ps) {
    auto f = noise(g, 37, 1.0);
    const double base = luxemburg_norm(f, p, 1e-12).value;
    for (double lam : {0.1, 3.0, 17.0}) {
      auto scaled = f;
      for (auto& v : scaled.values) v *= lam;
      const double got = luxemburg_norm(scaled, p, 1e-12).value;
      worst = std::max(worst, std::abs(got - lam * base) / (lam * base));
    }
  }
  report(3, worst <= 2e-8, "luxemburg norm is absolutely homogeneous",
         "max rel err " + fmt(worst));
}

// --- criterion 4: eta kernel mass across dyadic levels ---

void criterion4() {
  Grid g = make_grid(1, 8.0, 65536);
  double lo = 1e300, hi = -1e300;
  for (int v = 0; v <= 5; ++v) {
    auto k = eta_kernel(g, v, 3.0);  // m = n + 2
    const double mass = k.mass + k.analytic_tail;
    lo = std::min(lo, mass);
    hi = std::max(hi, mass);
  }
  const double spread = (hi - lo) / lo;
  auto k2 = eta_kernel(g, 3, 2.0);
  const double m2 = k2.mass + k2.analytic_tail;  // closed form 2/(m-1) = 2
  report(4, spread <= 1e-4 && std::abs(m2 - 2.0) <= 1e-4,
         "eta_{v,m} mass is v-independent and matches 2/(m-1)",
         "spread " + fmt(spread) + ", m=2 mass " + fmt(m2));
}

// --- criterion 5: r-trick ratios stay bounded across levels ---

void criterion5() {
  Grid g = make_grid(1, 8.0, 4096);
  std::vector<SampledFunction> corpus;
  for (std::uint64_t s = 0; s < 10; ++s) corpus.push_back(noise(g, 3000 + s));
  bool all_finite = true;
  double spread_max = 0.0;
  for (double r : {0.5, 1.0}) {
    for (std::size_t fi = 0; fi < corpus.size(); ++fi) {
      double lo = 1e300, hi = -1e300;
      for (int v = 0; v <= 4; ++v) {
        auto fb = bandlimit_project(corpus[fi], v);
        if (fb.max_abs() == 0.0) continue;
        auto res = r_trick_ratio(fb, r, 3.0, v);
        if (!std::isfinite(res.ratio) || res.ratio <= 0.0) all_finite = false;
        lo = std::min(lo, res.ratio);
        hi = std::max(hi, res.ratio);
      }
      spread_max = std::max(spread_max, hi / lo);
    }
  }
  report(5, all_finite && spread_max <= kRTrickSpreadMax,
         "r-trick ratios are finite with bounded spread across levels",
         "max spread " + fmt(spread_max) + " (bound " + fmt(kRTrickSpreadMax) +
             ")");
}

// --- criterion 6: theorem 2 sweep ---

void criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  Grid g = make_grid(1, 2.0, 256);
  std::vector<ExponentField> ps = {constant_exponent(g, 2.0),
                                   smooth_bump_exponent(g, 2.0, 1.0, 1.0),
                                   log_borderline_exponent(g, 2.0, 0.5)};
  std::vector<LogHolderReport> reps;
  for (const auto& p : ps) reps.push_back(check_plog(p, 10.0, 20000));
  auto corpus = mixed_corpus(g, 4);

  std::size_t configs = 0;
  double min_slack = 1e300;
  bool partitions_exact = true, i1_zero = true;
  for (std::size_t e = 0; e < ps.size(); ++e) {
    for (const auto& f : corpus) {
      for (long cells : {4L, 16L, 64L}) {
        Theorem2Config cfg;
        cfg.cube.side = double(cells) * g.spacing;
        cfg.cube.center = {cfg.cube.side / 2.0};
        const long start = g.points_per_axis / 2;
        for (long xoff : {0L, cells / 2}) {
          cfg.x_index = std::size_t(start + xoff);
          for (double hc : {0.0, 8.0, -8.0, 64.0, -64.0}) {
            cfg.h = {hc * g.spacing};
            for (double m : {2.0, 3.0}) {
              cfg.m = m;
              for (GammaVariant gv :
                   {GammaVariant::ClogRecip, GammaVariant::ClogP}) {
                cfg.gamma_variant = gv;
                auto rec = theorem2_check(f, ps[e], reps[e], cfg);
                min_slack = std::min(min_slack, rec.slack);
                auto strong =
                    theorem2_strengthened_check(f, ps[e], reps[e], cfg);
                min_slack = std::min(min_slack, strong.slack);
                auto dec = appendix_decomposition(f, ps[e], reps[e], cfg);
                partitions_exact &= dec.partition_exact;
                i1_zero &= dec.I1 == 0.0;
                ++configs;
              }
            }
          }
        }
      }
    }
  }
  const double el = seconds_since(t0);
  report(6,
         configs >= 1000 && min_slack >= -1e-12 && partitions_exact &&
             i1_zero && el < 300.0,
         "theorem 2 sweep holds with exact partitions",
         std::to_string(configs) + " configs, min slack " + fmt(min_slack) +
             ", " + fmt(el) + "s");
}

// --- criterion 7: theorem 3 translation bound ---

void criterion7() {
  Grid g = make_grid(1, 2.0, 1024);
  std::vector<SampledFunction> corpus;
  for (std::uint64_t s = 0; s < 5; ++s)
    corpus.push_back(bandlimit_project(noise(g, 4000 + s), 3));

  // constant exponent: every ratio pinned at 1
  {
    std::vector<ExponentField> ps = {constant_exponent(g, 2.0)};
    std::vector<LogHolderReport> reps = {check_plog(ps[0], 10.0, 1000)};
    auto rows = sweep_translation_bound(
        ps, reps, {0, 1, 2, 3},
        {4 * g.spacing, 16 * g.spacing, 64 * g.spacing}, corpus, 1e-12);
    double worst = 0.0;
    for (const auto& row : rows)
      worst = std::max(worst, std::abs(row.max_ratio - 1.0));
    if (worst > 2e-10) {
      report(7, false, "theorem 3 translation bound",
             "constant-p ratio deviates by " + fmt(worst));
      return;
    }
  }

  // P^log exponents: fitted constants inside the frozen regression band
  std::vector<ExponentField> ps = {smooth_bump_exponent(g, 2.0, 1.0, 1.0),
                                   log_borderline_exponent(g, 2.0, 0.5)};
  std::vector<LogHolderReport> reps;
  for (const auto& p : ps) reps.push_back(check_plog(p, 10.0, 20000));
  auto rows = sweep_translation_bound(
      ps, reps, {0, 1, 2, 3}, {4 * g.spacing, 16 * g.spacing, 64 * g.spacing},
      corpus, 1e-12);
  double c_lo = 1e300, c_hi = -1e300;
  bool bounded = true;
  for (const auto& row : rows) {
    bounded &= row.max_ratio <= row.envelope;
    c_lo = std::min(c_lo, row.fitted_c);
    c_hi = std::max(c_hi, row.fitted_c);
  }

  // envelope monotonicity
  bool monotone = true;
  double prev = 0.0;
  for (int v = 0; v < 6; ++v) {
    const double e = theorem3_envelope(v, 0.5, 0.3, 1);
    monotone &= e >= prev;
    prev = e;
  }
  prev = 0.0;
  for (double h : {0.0, 0.1, 0.5, 2.0}) {
    const double e = theorem3_envelope(2, h, 0.3, 1);
    monotone &= e >= prev;
    prev = e;
  }

  report(7,
         bounded && monotone && c_lo >= kFittedCMin && c_hi <= kFittedCMax,
         "theorem 3 translation bound",
         "fitted_c in [" + fmt(c_lo) + ", " + fmt(c_hi) + "], band [" +
             fmt(kFittedCMin) + ", " + fmt(kFittedCMax) + "]");
}

// --- criterion 8: translation counterexample ---

void criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  Grid g = make_grid(1, 2.0, 65536);
  auto p = step_exponent(g, 8.0, 2.0);
  std::vector<double> ks;
  for (const auto& [k, _] : kGrowthOracle) ks.push_back(k);
  auto rows = counterexample_growth(p, 0.5, ks);

  bool ok = rows.size() == kGrowthOracle.size();
  double worst = 0.0;
  for (std::size_t i = 0; ok && i < rows.size(); ++i) {
    worst = std::max(worst, std::abs(rows[i].ratio - kGrowthOracle[i].second) /
                                kGrowthOracle[i].second);
    if (i) ok &= rows[i].ratio >= rows[i - 1].ratio - 1e-12;
  }
  ok &= worst <= 1e-6;
  const double saturated = rows.back().ratio / rows[3].ratio;   // 1000 vs 10
  const double resolved = rows[2].ratio / rows[0].ratio;        // 8 vs 2
  ok &= saturated >= kGrowthSaturated - 1e-4;
  ok &= resolved >= kGrowthResolved - 1e-4;
  ok &= rows[2].clip_resolved && !rows[4].clip_resolved;  // k=16 > max sample

  // constant-exponent control stays flat
  auto control = counterexample_growth(constant_exponent(g, 2.0), 0.5, ks);
  for (const auto& row : control) ok &= std::abs(row.ratio - 1.0) <= 1e-9;

  const double el = seconds_since(t0);
  ok &= el < 60.0;
  report(8, ok, "translation unboundedness counterexample matches the oracle",
         "max rel err " + fmt(worst) + ", growth " + fmt(saturated) + "/" +
             fmt(resolved) + ", " + fmt(el) + "s");
}

// --- criterion 9: byte-identical determinism ---

void criterion9() {
  const char* config_text = R"(
[experiment]
name = determinism
seed = 11
[grid]
dimension = 1
half_width = 2
points = 256
[exponents]
families = smooth_bump:2,1,1; step:8,2; constant:2
[corpus]
functions = indicator:0,1; noise:3; gaussian:0,0.5
[sweep]
v = 0:2
h_cells = 4, 8
q_cells = 16
m = 2
clip_levels = 2, 4, 8
)";
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool ok = true;
  std::string detail;
  for (const std::string sub :
       {"norms", "clog", "thm2", "translate-sweep", "counterexample"}) {
    std::vector<std::string> outs;
    for (int run = 0; run < 2; ++run) {
      fs::path dir = fs::temp_directory_path() /
                     ("vexlp_accept_" + sub + std::to_string(run));
      fs::remove_all(dir);
      auto cfg = harness::parse_config_text(config_text);
      cfg.output_dir = dir.string();
      harness::write_bundle(harness::run_bundle(sub, cfg), cfg, sub);
      outs.push_back(slurp(dir / (sub + ".csv")));
      ok &= !outs.back().empty();
    }
    if (outs[0] != outs[1]) {
      ok = false;
      detail += sub + " differs; ";
    }
  }
  if (detail.empty()) detail = "5 subcommands byte-identical across reruns";
  report(9, ok, "fixed seed reproduces identical CSV output", detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
