#include <doctest.h>

#include <cmath>
#include <random>

#include "vexlp/norms.hpp"
#include "vexlp/operators.hpp"

using namespace vexlp;

namespace {

SampledFunction clipped_power(const Grid& g) {
  return sample(g, [](double x) {
    if (x <= 0 || x >= 1) return 0.0;
    return std::min(std::pow(x, -0.25), 10.0);
  });
}

SampledFunction noise(const Grid& g, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, scale);
  auto f = make_function(g);
  for (auto& v : f.values) v = dist(rng);
  return f;
}

}  // namespace

TEST_CASE("modular basics") {
  Grid g = make_grid(1, 2.0, 512);
  auto p = constant_exponent(g, 2.0);
  CHECK(modular(make_function(g), p).value() == 0.0);

  auto ind = sample(g, [](double x) { return x >= 0 && x < 1 ? 3.0 : 0.0; });
  CHECK(modular(ind, p).value() == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("modular against a pinned quadrature value") {
  // f = min(x^{-1/4}, 10) on (0,1), p(x) = 2 + exp(-x^2)
  for (auto [N, expect] : {std::pair{512, 2.9302029705},
                           {4096, 3.3483835408}}) {
    Grid g = make_grid(1, 2.0, N);
    auto p = smooth_bump_exponent(g, 2.0, 1.0, 1.0);
    CHECK(modular(clipped_power(g), p).value() ==
          doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("modular overflow guard") {
  Grid g = make_grid(1, 2.0, 64);
  auto p = constant_exponent(g, 8.0);
  auto f = make_function(g, 1e40);  // 1e40^8 = 1e320 > 1e300
  CHECK_FALSE(modular(f, p).has_value());
}

TEST_CASE("luxemburg norm equals classical L^p norm for constant p") {
  for (double p0 : {1.0, 2.0, 4.0}) {
    Grid g = make_grid(1, 4.0, 1024);
    auto p = constant_exponent(g, p0);
    auto f = noise(g, std::uint64_t(p0), 1.0);
    double acc = 0.0;
    for (double v : f.values) acc += std::pow(std::abs(v), p0);
    const double classical = std::pow(g.spacing * acc, 1.0 / p0);
    CHECK(luxemburg_norm(f, p).value ==
          doctest::Approx(classical).epsilon(1e-8));
  }
}

TEST_CASE("mixed step exponent has closed-form norm") {
  // p = 2 on x<0, 4 on x>=0, f = 2*chi_[0,1): modular(f/mu) = (2/mu)^4
  Grid g = make_grid(1, 2.0, 512);
  auto p = step_exponent(g, 2.0, 4.0);
  auto f = sample(g, [](double x) { return x >= 0 && x < 1 ? 2.0 : 0.0; });
  CHECK(luxemburg_norm(f, p).value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("pinned luxemburg norm for the clipped power") {
  Grid g = make_grid(1, 2.0, 4096);
  auto p = smooth_bump_exponent(g, 2.0, 1.0, 1.0);
  CHECK(luxemburg_norm(clipped_power(g), p).value ==
        doctest::Approx(1.5185708790).epsilon(1e-8));
}

TEST_CASE("quasi-norm case p = 1/2") {
  // modular(f/mu) = integral (4/mu)^{1/2} over [0,1) = 2/sqrt(mu) -> mu = 4
  Grid g = make_grid(1, 2.0, 512);
  auto p = constant_exponent(g, 0.5);
  auto f = sample(g, [](double x) { return x >= 0 && x < 1 ? 4.0 : 0.0; });
  CHECK(luxemburg_norm(f, p).value == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("homogeneity of the luxemburg norm") {
  Grid g = make_grid(1, 2.0, 512);
  for (auto p : {constant_exponent(g, 0.5), smooth_bump_exponent(g, 2, 1, 1),
                 step_exponent(g, 2.0, 8.0)}) {
    auto f = noise(g, 11, 0.7);
    const double base = luxemburg_norm(f, p).value;
    for (double lam : {0.1, 3.0, 17.0}) {
      auto scaled = f;
      for (auto& v : scaled.values) v *= lam;
      CHECK(luxemburg_norm(scaled, p).value ==
            doctest::Approx(lam * base).epsilon(1e-8));
    }
  }
}

TEST_CASE("norm of zero is zero") {
  Grid g = make_grid(1, 2.0, 64);
  auto p = smooth_bump_exponent(g, 2.0, 1.0, 1.0);
  CHECK(luxemburg_norm(make_function(g), p).value == 0.0);
}

TEST_CASE("norm monotone under pointwise domination") {
  Grid g = make_grid(1, 2.0, 512);
  auto p = smooth_bump_exponent(g, 2.0, 1.5, 0.5);
  auto f = noise(g, 23, 1.0);
  auto dominated = f;
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& v : dominated.values) v *= u(rng);
  CHECK(luxemburg_norm(dominated, p).value <=
        luxemburg_norm(f, p).value + 1e-10);
}

TEST_CASE("norm is invariant under cell-aligned translation of f and p") {
  Grid g = make_grid(1, 2.0, 512);
  auto p = smooth_bump_exponent(g, 2.0, 1.0, 0.7);
  auto f = noise(g, 31, 1.0);
  const std::vector<double> h = {13 * g.spacing};
  auto pf = p;
  pf.samples = translate(p.samples, h);
  CHECK(luxemburg_norm(translate(f, h), pf).value ==
        doctest::Approx(luxemburg_norm(f, p).value).epsilon(1e-12));
}

TEST_CASE("modular at the returned norm sits at the unit threshold") {
  Grid g = make_grid(1, 2.0, 1024);
  auto p = smooth_bump_exponent(g, 2.0, 1.0, 1.0);
  auto f = noise(g, 41, 2.0);
  auto res = luxemburg_norm(f, p, 1e-12);
  CHECK(res.modular_at_value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.bracket_low <= res.value);
  CHECK(res.value <= res.bracket_high);
}

TEST_CASE("unit ball equivalence on random functions") {
  Grid g = make_grid(1, 2.0, 512);
  auto p = smooth_bump_exponent(g, 2.0, 1.0, 1.0);
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto f = noise(g, 100 + s, 0.2 + 0.1 * double(s));
    auto rep = unit_ball_check(f, p);
    CHECK(rep.agrees);
  }
}

TEST_CASE("unit ball equivalence near the boundary") {
  Grid g = make_grid(1, 2.0, 512);
  auto p = smooth_bump_exponent(g, 2.0, 1.0, 1.0);
  auto f = noise(g, 7, 1.0);
  const double nrm = luxemburg_norm(f, p).value;
  for (double scale : {0.999, 1.001}) {
    auto scaled = f;
    for (auto& v : scaled.values) v *= scale / nrm;
    CHECK(unit_ball_check(scaled, p).agrees);
  }
}
