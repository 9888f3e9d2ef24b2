#include "vexlp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "vexlp/norms.hpp"
#include "vexlp/operators.hpp"

namespace vexlp::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------- small string helpers ----------

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& tok : split(s, ',')) {
    // a:b means the inclusive integer range a..b
    const auto colon = tok.find(':');
    if (colon != std::string::npos) {
      const long a = std::stol(tok.substr(0, colon));
      const long b = std::stol(tok.substr(colon + 1));
      for (long i = a; i <= b; ++i) out.push_back(double(i));
    } else {
      out.push_back(std::stod(tok));
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------- config ----------

/// Distinguishes our annotated config diagnostics from the bare
/// std::invalid_argument thrown by stoi/stod.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

ExponentFamily family_from_name(const std::string& name) {
  if (name == "constant") return ExponentFamily::Constant;
  if (name == "smooth_bump") return ExponentFamily::SmoothBump;
  if (name == "log_borderline") return ExponentFamily::LogBorderline;
  if (name == "step") return ExponentFamily::Step;
  throw std::invalid_argument("unknown exponent family: " + name);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  cfg.raw_text = text;

  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    auto fail = [&](const std::string& why) -> ConfigError {
      return ConfigError("config line " + std::to_string(lineno) + ", [" +
                         section + "] " + key + ": " + why);
    };

    try {
      if (section == "experiment") {
        if (key == "name") cfg.name = val;
        else if (key == "seed") cfg.seed = std::stoull(val);
        else throw fail("unknown key");
      } else if (section == "grid") {
        if (key == "dimension") cfg.grid.dimension = std::stoi(val);
        else if (key == "points") cfg.grid.points = std::stoi(val);
        else if (key == "half_width") cfg.grid.half_width = std::stod(val);
        else throw fail("unknown key");
      } else if (section == "exponents") {
        if (key != "families") throw fail("unknown key");
        for (const auto& item : split(val, ';')) {
          if (item.empty()) continue;
          const auto colon = item.find(':');
          ExponentSpec spec;
          spec.family = family_from_name(
              trim(colon == std::string::npos ? item : item.substr(0, colon)));
          if (colon != std::string::npos)
            spec.params = parse_numbers(item.substr(colon + 1));
          cfg.exponents.push_back(std::move(spec));
        }
      } else if (section == "corpus") {
        if (key != "functions") throw fail("unknown key");
        for (const auto& item : split(val, ';')) {
          if (item.empty()) continue;
          const auto colon = item.find(':');
          FunctionSpec spec;
          spec.kind =
              trim(colon == std::string::npos ? item : item.substr(0, colon));
          if (colon != std::string::npos)
            spec.params = parse_numbers(item.substr(colon + 1));
          cfg.corpus.push_back(std::move(spec));
        }
      } else if (section == "sweep") {
        if (key == "v") {
          for (double x : parse_numbers(val)) cfg.v_range.push_back(int(x));
        } else if (key == "h_cells") cfg.h_cells = parse_numbers(val);
        else if (key == "q_cells") cfg.q_cells = parse_numbers(val);
        else if (key == "m") cfg.m_values = parse_numbers(val);
        else if (key == "r") cfg.r_values = parse_numbers(val);
        else if (key == "clip_levels") cfg.clip_levels = parse_numbers(val);
        else throw fail("unknown key");
      } else if (section == "tolerances") {
        if (key == "norm_tol") cfg.norm_tol = std::stod(val);
        else if (key == "pair_budget") cfg.pair_budget = std::stoull(val);
        else if (key == "plog_threshold") cfg.plog_threshold = std::stod(val);
        else throw fail("unknown key");
      } else if (section == "output") {
        if (key == "dir") cfg.output_dir = val;
        else if (key == "svg") cfg.svg = (val == "true" || val == "1");
        else throw fail("unknown key");
      } else {
        throw fail("unknown section");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw fail(e.what());
    }
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::vector<std::string> subcommands() {
  return {"norms",  "clog",           "rtrick",         "thm2",
          "thm2-strong", "translate-sweep", "conv-corollary", "counterexample"};
}

std::string config_hash(const std::string& raw) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : raw) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
  return buf;
}

int thread_cap() {
  if (const char* env = std::getenv("VEXLP_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? int(hw) : 1;
}

namespace {

// Parallel evaluation with deterministic slot assignment: results land at
// their own index no matter which worker computed them.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const int threads = std::min<std::size_t>(thread_cap(), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

// Name parameters are joined with ';' so the names stay single CSV cells.
std::string function_name(const FunctionSpec& spec) {
  std::string s = spec.kind + "(";
  for (std::size_t i = 0; i < spec.params.size(); ++i) {
    if (i) s += ";";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", spec.params[i]);
    s += buf;
  }
  return s + ")";
}

std::vector<SampledFunction> build_corpus(
    const Grid& grid, const std::vector<FunctionSpec>& specs,
    std::uint64_t seed) {
  std::vector<SampledFunction> out;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const FunctionSpec& spec = specs[i];
    const auto& q = spec.params;
    if (spec.kind == "indicator") {
      if (q.size() != 2) throw std::invalid_argument("indicator needs a,b");
      out.push_back(
          grid.dimension == 1
              ? sample(grid,
                       [&](double x) { return x >= q[0] && x < q[1] ? 1.0 : 0.0; })
              : sample(grid, [&](double x, double y) {
                  return x >= q[0] && x < q[1] && y >= q[0] && y < q[1] ? 1.0
                                                                        : 0.0;
                }));
    } else if (spec.kind == "gaussian") {
      if (q.size() != 2) throw std::invalid_argument("gaussian needs c,w");
      const double c = q[0], w2 = q[1] * q[1];
      out.push_back(grid.dimension == 1
                        ? sample(grid,
                                 [&](double x) {
                                   return std::exp(-(x - c) * (x - c) / w2);
                                 })
                        : sample(grid, [&](double x, double y) {
                            return std::exp(-((x - c) * (x - c) +
                                              (y - c) * (y - c)) /
                                            w2);
                          }));
    } else if (spec.kind == "power_clip") {
      if (q.size() != 1) throw std::invalid_argument("power_clip needs k");
      const double k = q[0];
      auto f1 = [&](double x) {
        return x > 0.0 && x < 1.0 ? std::min(std::pow(x, -0.25), k) : 0.0;
      };
      out.push_back(grid.dimension == 1
                        ? sample(grid, f1)
                        : sample(grid, [&](double x, double) { return f1(x); }));
    } else if (spec.kind == "noise") {
      if (q.size() != 1) throw std::invalid_argument("noise needs v");
      std::mt19937_64 rng(seed * 0x2545f4914f6cdd1dULL + 17 * i + 1);
      std::normal_distribution<double> dist;
      SampledFunction white = make_function(grid);
      for (double& v : white.values) v = dist(rng);
      SampledFunction banded = bandlimit_project(white, int(q[0]));
      const double m = banded.max_abs();
      if (m > 0)
        for (double& v : banded.values) v /= m;
      out.push_back(std::move(banded));
    } else {
      throw std::invalid_argument("unknown corpus function kind: " + spec.kind);
    }
  }
  return out;
}

namespace {

std::string exponent_name(const ExponentSpec& spec) {
  std::string s = family_name(spec.family) + "(";
  for (std::size_t i = 0; i < spec.params.size(); ++i) {
    if (i) s += ";";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", spec.params[i]);
    s += buf;
  }
  return s + ")";
}

struct Built {
  Grid grid;
  std::vector<ExponentField> exponents;
  std::vector<LogHolderReport> reports;
  std::vector<std::string> exponent_names;
  std::vector<SampledFunction> corpus;
  std::vector<std::string> function_names;
};

Built build_all(const ExperimentConfig& cfg) {
  Built b;
  b.grid = make_grid(cfg.grid.dimension, cfg.grid.half_width, cfg.grid.points);
  for (const auto& spec : cfg.exponents) {
    b.exponents.push_back(build_exponent(spec.family, spec.params, b.grid));
    b.reports.push_back(check_plog(b.exponents.back(), cfg.plog_threshold,
                                   cfg.pair_budget, cfg.seed));
    b.exponent_names.push_back(exponent_name(spec));
  }
  b.corpus = build_corpus(b.grid, cfg.corpus, cfg.seed);
  for (const auto& spec : cfg.corpus)
    b.function_names.push_back(function_name(spec));
  return b;
}

ReportRow base_row(const ExperimentConfig& cfg, const std::string& sub) {
  ReportRow row;
  row.experiment = cfg.name;
  row.subcommand = sub;
  return row;
}

// ---------- subcommand bodies ----------

std::vector<ReportRow> run_norms(const ExperimentConfig& cfg,
                                 const Built& b) {
  std::vector<ReportRow> rows;
  for (std::size_t e = 0; e < b.exponents.size(); ++e) {
    for (std::size_t f = 0; f < b.corpus.size(); ++f) {
      ReportRow row = base_row(cfg, "norms");
      row.exponent = b.exponent_names[e];
      row.function = b.function_names[f];
      auto mod = modular(b.corpus[f], b.exponents[e]);
      row.lhs = mod.value_or(1e300);
      NormResult nr = luxemburg_norm(b.corpus[f], b.exponents[e], cfg.norm_tol);
      row.ratio = nr.value;
      if (nr.value > 0) row.slack = nr.modular_at_value - 1.0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ReportRow> run_clog(const ExperimentConfig& cfg, const Built& b) {
  std::vector<ReportRow> rows;
  for (std::size_t e = 0; e < b.exponents.size(); ++e) {
    const LogHolderReport& rep = b.reports[e];
    ReportRow row = base_row(cfg, "clog");
    row.exponent = b.exponent_names[e];
    row.lhs = rep.clog_local_p;
    row.rhs_m_term = rep.clog_local_recip;
    if (!std::isnan(rep.clog_decay_recip))
      row.rhs_decay_term = rep.clog_decay_recip;
    if (!std::isnan(rep.clog_decay_p)) row.envelope = rep.clog_decay_p;
    row.hypothesis_ok = rep.is_plog ? 1 : 0;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ReportRow> run_rtrick(const ExperimentConfig& cfg,
                                  const Built& b) {
  std::vector<double> rs = cfg.r_values.empty()
                               ? std::vector<double>{0.5, 1.0}
                               : cfg.r_values;
  std::vector<double> ms = cfg.m_values.empty()
                               ? std::vector<double>{double(b.grid.dimension) + 2}
                               : cfg.m_values;
  std::vector<ReportRow> rows;
  for (double r : rs) {
    for (double m : ms) {
      for (int v : cfg.v_range) {
        for (std::size_t f = 0; f < b.corpus.size(); ++f) {
          SampledFunction fb = bandlimit_project(b.corpus[f], v);
          if (fb.max_abs() == 0.0) continue;
          RTrickResult res = r_trick_ratio(fb, r, m, v);
          ReportRow row = base_row(cfg, "rtrick");
          row.function = b.function_names[f];
          row.v = v;
          row.r = r;
          row.m = m;
          row.ratio = res.ratio;
          row.k = double(res.skipped);
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

std::vector<ReportRow> run_thm2(const ExperimentConfig& cfg, const Built& b,
                                bool strengthened) {
  const std::string sub = strengthened ? "thm2-strong" : "thm2";
  const Grid& grid = b.grid;

  struct Job {
    std::size_t e, f;
    Theorem2Config t2;
    std::string variant_name;
  };
  std::vector<Job> jobs;

  // Normalize each (f, p) pair once; configs then skip renormalization.
  std::vector<std::vector<SampledFunction>> normalized(b.exponents.size());
  for (std::size_t e = 0; e < b.exponents.size(); ++e) {
    for (const auto& f : b.corpus) {
      SampledFunction nf = f;
      if (nf.max_abs() > 0) {
        const double scale = luxemburg_norm(f, b.exponents[e], cfg.norm_tol).value +
                             f.max_abs() + cfg.norm_tol;
        for (double& v : nf.values) v /= scale;
      }
      normalized[e].push_back(std::move(nf));
    }
  }

  std::vector<GammaVariant> variants =
      strengthened ? std::vector<GammaVariant>{GammaVariant::ClogRecip}
                   : std::vector<GammaVariant>{GammaVariant::ClogRecip,
                                               GammaVariant::ClogP};
  for (std::size_t e = 0; e < b.exponents.size(); ++e) {
    for (std::size_t f = 0; f < b.corpus.size(); ++f) {
      for (double qc : cfg.q_cells) {
        const long cells = std::lround(qc);
        if (cells < 1 || cells > grid.points_per_axis) continue;
        Cube cube;
        cube.side = double(cells) * grid.spacing;
        cube.center.assign(grid.dimension, cube.side / 2.0);  // cube [0, side)
        const long start = grid.points_per_axis / 2;  // x = 0 cell
        std::vector<std::size_t> xs;
        auto flat = [&](long axis_idx) {
          return grid.dimension == 1
                     ? std::size_t(axis_idx)
                     : std::size_t(axis_idx) * grid.points_per_axis + axis_idx;
        };
        xs.push_back(flat(start));
        if (cells > 1) xs.push_back(flat(start + cells / 2));
        for (double hc : cfg.h_cells) {
          for (double m : cfg.m_values.empty() ? std::vector<double>{2.0}
                                               : cfg.m_values) {
            for (GammaVariant gv : variants) {
              for (std::size_t x : xs) {
                Job job;
                job.e = e;
                job.f = f;
                job.t2.cube = cube;
                job.t2.x_index = x;
                job.t2.h.assign(grid.dimension, 0.0);
                job.t2.h[0] = hc * grid.spacing;
                job.t2.m = m;
                job.t2.gamma_variant = gv;
                job.t2.normalize = false;
                job.t2.norm_tol = cfg.norm_tol;
                job.variant_name =
                    gv == GammaVariant::ClogRecip ? "clog(1/p)" : "clog(p)";
                jobs.push_back(std::move(job));
              }
            }
          }
        }
      }
    }
  }

  std::vector<ReportRow> rows(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const Job& job = jobs[i];
    VerificationRecord rec =
        strengthened
            ? theorem2_strengthened_check(normalized[job.e][job.f],
                                          b.exponents[job.e],
                                          b.reports[job.e], job.t2)
            : theorem2_check(normalized[job.e][job.f], b.exponents[job.e],
                             b.reports[job.e], job.t2);
    ReportRow row = base_row(cfg, sub);
    row.exponent = b.exponent_names[job.e];
    row.function = b.function_names[job.f];
    row.gamma_variant = job.variant_name;
    row.h = job.t2.h[0];
    row.q_side = job.t2.cube.side;
    row.m = job.t2.m;
    row.x_index = double(job.t2.x_index);
    row.hypothesis_ok = rec.hypothesis_violated ? 0 : 1;
    row.lhs = rec.lhs;
    row.rhs_m_term = rec.rhs_m_term;
    row.rhs_decay_term = rec.rhs_decay_term;
    row.slack = rec.slack;
    rows[i] = std::move(row);
  });
  return rows;
}

std::vector<ReportRow> run_translate_sweep(const ExperimentConfig& cfg,
                                           const Built& b) {
  std::vector<double> hs;
  for (double hc : cfg.h_cells) hs.push_back(hc * b.grid.spacing);
  auto sweep = sweep_translation_bound(b.exponents, b.reports, cfg.v_range,
                                       hs, b.corpus, cfg.norm_tol);
  std::vector<ReportRow> rows;
  for (const auto& s : sweep) {
    ReportRow row = base_row(cfg, "translate-sweep");
    row.exponent = s.exponent;
    row.v = s.v;
    row.h = s.h;
    row.ratio = s.max_ratio;
    row.envelope = s.envelope;
    row.fitted_c = s.fitted_c;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ReportRow> run_conv(const ExperimentConfig& cfg, const Built& b) {
  std::vector<ReportRow> rows;
  for (std::size_t e = 0; e < b.exponents.size(); ++e) {
    for (std::size_t gi = 0; gi < b.corpus.size(); ++gi) {
      if (cfg.corpus[gi].kind != "gaussian" &&
          cfg.corpus[gi].kind != "indicator")
        continue;  // g must have a finite weighted L1 norm
      for (std::size_t f = 0; f < b.corpus.size(); ++f) {
        for (int v : cfg.v_range) {
          SampledFunction fb = bandlimit_project(b.corpus[f], v);
          if (fb.max_abs() == 0.0) continue;
          VerificationRecord rec = convolution_corollary_check(
              b.corpus[f], b.corpus[gi], b.exponents[e], b.reports[e], v,
              cfg.norm_tol);
          ReportRow row = base_row(cfg, "conv-corollary");
          row.exponent = b.exponent_names[e];
          row.function = b.function_names[f] + "*" + b.function_names[gi];
          row.v = v;
          if (rec.config_rejected) {
            row.hypothesis_ok = 0;
          } else {
            row.hypothesis_ok = rec.hypothesis_violated ? 0 : 1;
            row.lhs = rec.lhs;
            row.rhs_m_term = rec.rhs_m_term;
            row.slack = rec.slack;
            if (rec.rhs_m_term > 0) row.fitted_c = rec.lhs / rec.rhs_m_term;
          }
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

std::vector<ReportRow> run_counterexample(const ExperimentConfig& cfg,
                                          const Built& b) {
  std::vector<double> ks = cfg.clip_levels.empty()
                               ? std::vector<double>{2, 4, 8, 10, 16, 1000}
                               : cfg.clip_levels;
  std::vector<ReportRow> rows;
  for (std::size_t e = 0; e < b.exponents.size(); ++e) {
    if (b.exponents[e].family != ExponentFamily::Step &&
        b.exponents[e].family != ExponentFamily::Constant)
      continue;
    auto growth = counterexample_growth(b.exponents[e], 0.5, ks, cfg.norm_tol);
    for (const auto& g : growth) {
      ReportRow row = base_row(cfg, "counterexample");
      row.exponent = b.exponent_names[e];
      row.k = g.clip_level;
      row.ratio = g.ratio;
      row.resolved = g.clip_resolved ? 1 : 0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// ---------- CSV ----------

const char* kHeader =
    "experiment,subcommand,exponent,function,gamma_variant,v,h,q_side,m,r,k,"
    "x_index,hypothesis_ok,resolved,lhs,rhs_m_term,rhs_decay_term,slack,"
    "ratio,envelope,fitted_c";

std::string row_to_csv(const ReportRow& r) {
  auto num = [](const std::optional<double>& v) {
    return v ? fmt(*v) : std::string();
  };
  auto inum = [](const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string();
  };
  std::string out;
  out += r.experiment + "," + r.subcommand + "," + r.exponent + "," +
         r.function + "," + r.gamma_variant + ",";
  out += inum(r.v) + "," + num(r.h) + "," + num(r.q_side) + "," + num(r.m) +
         "," + num(r.r) + "," + num(r.k) + "," + num(r.x_index) + ",";
  out += inum(r.hypothesis_ok) + "," + inum(r.resolved) + ",";
  out += num(r.lhs) + "," + num(r.rhs_m_term) + "," + num(r.rhs_decay_term) +
         "," + num(r.slack) + "," + num(r.ratio) + "," + num(r.envelope) +
         "," + num(r.fitted_c);
  return out;
}

ReportRow row_from_csv(const std::string& line) {
  const auto cells = split(line, ',');
  if (cells.size() != 21)
    throw std::runtime_error("CSV row has wrong column count");
  auto num = [&](std::size_t i) -> std::optional<double> {
    if (cells[i].empty()) return std::nullopt;
    return std::stod(cells[i]);
  };
  auto inum = [&](std::size_t i) -> std::optional<int> {
    if (cells[i].empty()) return std::nullopt;
    return std::stoi(cells[i]);
  };
  ReportRow r;
  r.experiment = cells[0];
  r.subcommand = cells[1];
  r.exponent = cells[2];
  r.function = cells[3];
  r.gamma_variant = cells[4];
  r.v = inum(5);
  r.h = num(6);
  r.q_side = num(7);
  r.m = num(8);
  r.r = num(9);
  r.k = num(10);
  r.x_index = num(11);
  r.hypothesis_ok = inum(12);
  r.resolved = inum(13);
  r.lhs = num(14);
  r.rhs_m_term = num(15);
  r.rhs_decay_term = num(16);
  r.slack = num(17);
  r.ratio = num(18);
  r.envelope = num(19);
  r.fitted_c = num(20);
  return r;
}

// ---------- SVG ----------

void write_svg(const std::string& path, const std::vector<ReportRow>& rows) {
  // ratio and envelope vs |h|, one polyline pair per (exponent, v), log10 y.
  std::vector<std::pair<std::string, int>> series;
  for (const auto& r : rows) {
    if (!r.v || !r.h || !r.ratio) continue;
    std::pair<std::string, int> key{r.exponent, *r.v};
    if (std::find(series.begin(), series.end(), key) == series.end())
      series.push_back(key);
  }
  if (series.empty()) return;

  double hmin = 1e300, hmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& r : rows) {
    if (!r.h || !r.ratio) continue;
    hmin = std::min(hmin, std::abs(*r.h));
    hmax = std::max(hmax, std::abs(*r.h));
    for (double y : {*r.ratio, r.envelope.value_or(*r.ratio)}) {
      if (y > 0) {
        ymin = std::min(ymin, std::log10(y));
        ymax = std::max(ymax, std::log10(y));
      }
    }
  }
  if (!(hmax > hmin)) hmax = hmin + 1;
  if (!(ymax > ymin)) ymax = ymin + 1;

  const double W = 640, H = 420, ML = 60, MB = 40, MT = 20, MR = 20;
  auto X = [&](double h) {
    return ML + (std::abs(h) - hmin) / (hmax - hmin) * (W - ML - MR);
  };
  auto Y = [&](double y) {
    return H - MB - (std::log10(std::max(y, 1e-300)) - ymin) / (ymax - ymin) *
                        (H - MT - MB);
  };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

  std::ofstream out(path, std::ios::binary);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  int ci = 0;
  for (const auto& key : series) {
    const char* color = colors[ci++ % 6];
    for (int pass = 0; pass < 2; ++pass) {
      std::string pts;
      for (const auto& r : rows) {
        if (!r.v || !r.h || *r.v != key.second || r.exponent != key.first)
          continue;
        const auto& val = pass == 0 ? r.ratio : r.envelope;
        if (!val) continue;
        pts += fmt(X(*r.h)) + "," + fmt(Y(*val)) + " ";
      }
      if (pts.empty()) continue;
      out << "<polyline fill=\"none\" stroke=\"" << color << "\""
          << (pass == 1 ? " stroke-dasharray=\"5,4\"" : "")
          << " points=\"" << pts << "\"/>\n";
    }
    out << "<text x=\"" << ML + 5 << "\" y=\"" << MT + 14 * ci
        << "\" fill=\"" << color << "\" font-size=\"11\">" << key.first
        << " v=" << key.second << "</text>\n";
  }
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 8
      << "\" font-size=\"12\">|h| (ratio solid, envelope dashed; log y)"
      << "</text>\n";
  out << "</svg>\n";
}

}  // namespace

ReportSummary summarize(const std::string& subcommand,
                        const std::vector<ReportRow>& rows,
                        const std::string& hash) {
  ReportSummary s;
  s.rows = rows.size();
  s.config_hash = hash;
  for (const auto& r : rows) {
    if (r.slack && r.hypothesis_ok.value_or(1) == 1)
      s.min_slack = std::min(s.min_slack.value_or(1e300), *r.slack);
    if (r.ratio) s.max_ratio = std::max(s.max_ratio.value_or(-1e300), *r.ratio);
  }
  auto fitted_minmax = [&](const char* lo_key, const char* hi_key) {
    double lo = 1e300, hi = -1e300;
    bool any = false;
    for (const auto& r : rows) {
      if (!r.fitted_c) continue;
      any = true;
      lo = std::min(lo, *r.fitted_c);
      hi = std::max(hi, *r.fitted_c);
    }
    if (any) {
      s.fitted_constants[lo_key] = lo;
      s.fitted_constants[hi_key] = hi;
    }
  };
  if (subcommand == "translate-sweep" || subcommand == "conv-corollary")
    fitted_minmax("fitted_c_min", "fitted_c_max");
  if (subcommand == "rtrick") {
    double lo = 1e300, hi = -1e300;
    bool any = false;
    for (const auto& r : rows) {
      if (!r.ratio) continue;
      any = true;
      lo = std::min(lo, *r.ratio);
      hi = std::max(hi, *r.ratio);
    }
    if (any) {
      s.fitted_constants["ratio_min"] = lo;
      s.fitted_constants["ratio_max"] = hi;
    }
  }
  if (subcommand == "counterexample") {
    // growth per exponent: last over first clip level
    std::map<std::string, std::pair<double, double>> firstlast;
    for (const auto& r : rows) {
      if (!r.ratio) continue;
      auto it = firstlast.find(r.exponent);
      if (it == firstlast.end())
        firstlast[r.exponent] = {*r.ratio, *r.ratio};
      else
        it->second.second = *r.ratio;
    }
    for (const auto& [name, fl] : firstlast)
      s.fitted_constants["growth:" + name] = fl.second / fl.first;
  }
  return s;
}

ReportBundle run_bundle(const std::string& subcommand,
                        const ExperimentConfig& cfg) {
  Built b = build_all(cfg);
  ReportBundle bundle;
  if (subcommand == "norms")
    bundle.rows = run_norms(cfg, b);
  else if (subcommand == "clog")
    bundle.rows = run_clog(cfg, b);
  else if (subcommand == "rtrick")
    bundle.rows = run_rtrick(cfg, b);
  else if (subcommand == "thm2")
    bundle.rows = run_thm2(cfg, b, false);
  else if (subcommand == "thm2-strong")
    bundle.rows = run_thm2(cfg, b, true);
  else if (subcommand == "translate-sweep")
    bundle.rows = run_translate_sweep(cfg, b);
  else if (subcommand == "conv-corollary")
    bundle.rows = run_conv(cfg, b);
  else if (subcommand == "counterexample")
    bundle.rows = run_counterexample(cfg, b);
  else
    throw std::invalid_argument("unknown subcommand: " + subcommand);
  bundle.summary =
      summarize(subcommand, bundle.rows, config_hash(cfg.raw_text));
  return bundle;
}

void write_bundle(const ReportBundle& bundle, const ExperimentConfig& cfg,
                  const std::string& subcommand) {
  fs::create_directories(cfg.output_dir);
  const std::string base = cfg.output_dir + "/" + subcommand;
  {
    std::ofstream out(base + ".csv", std::ios::binary);
    out << kHeader << "\n";
    for (const auto& row : bundle.rows) out << row_to_csv(row) << "\n";
  }
  {
    json j;
    j["rows"] = bundle.summary.rows;
    j["min_slack"] = bundle.summary.min_slack
                         ? json(*bundle.summary.min_slack)
                         : json(nullptr);
    j["max_ratio"] = bundle.summary.max_ratio
                         ? json(*bundle.summary.max_ratio)
                         : json(nullptr);
    j["fitted_constants"] = bundle.summary.fitted_constants;
    j["config_hash"] = bundle.summary.config_hash;
    std::ofstream out(base + "_summary.json", std::ios::binary);
    out << j.dump(2) << "\n";
  }
  if (cfg.svg && subcommand == "translate-sweep") {
    try {
      write_svg(base + ".svg", bundle.rows);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "warning: SVG emission failed: %s\n", e.what());
    }
  }
}

ReportBundle load_bundle(const std::string& dir,
                         const std::string& subcommand) {
  const std::string base = dir + "/" + subcommand;
  ReportBundle bundle;
  {
    std::ifstream in(base + ".csv", std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + base + ".csv");
    std::string line;
    if (!std::getline(in, line) || line != kHeader)
      throw std::runtime_error("unexpected CSV header in " + base + ".csv");
    while (std::getline(in, line))
      if (!line.empty()) bundle.rows.push_back(row_from_csv(line));
  }
  json j;
  {
    std::ifstream in(base + "_summary.json", std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + base + "_summary.json");
    in >> j;
  }
  bundle.summary.rows = j.at("rows").get<std::size_t>();
  if (!j.at("min_slack").is_null())
    bundle.summary.min_slack = j.at("min_slack").get<double>();
  if (!j.at("max_ratio").is_null())
    bundle.summary.max_ratio = j.at("max_ratio").get<double>();
  bundle.summary.fitted_constants =
      j.at("fitted_constants").get<std::map<std::string, double>>();
  bundle.summary.config_hash = j.at("config_hash").get<std::string>();

  ReportSummary recomputed =
      summarize(subcommand, bundle.rows, bundle.summary.config_hash);
  if (recomputed.rows != bundle.summary.rows ||
      recomputed.min_slack != bundle.summary.min_slack ||
      recomputed.max_ratio != bundle.summary.max_ratio ||
      recomputed.fitted_constants != bundle.summary.fitted_constants)
    throw std::runtime_error(
        "stored summary does not match one recomputed from rows");
  return bundle;
}

int run(const std::string& subcommand, const ExperimentConfig& cfg) {
  ReportBundle bundle = run_bundle(subcommand, cfg);
  write_bundle(bundle, cfg, subcommand);
  if (subcommand == "thm2" || subcommand == "thm2-strong") {
    if (bundle.summary.min_slack && *bundle.summary.min_slack < -1e-12)
      return 1;
  }
  return 0;
}

}  // namespace vexlp::harness
