#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mls/error.hpp"
#include "mls/spectral.hpp"

using namespace mls;

namespace {

MatrixX<double> m2(double a, double b, double c, double d) {
  MatrixX<double> m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("diagonal sets have exact joint spectral radius") {
  const MatrixSet<double> S({m2(2, 0, 0, 1), m2(1, 0, 0, 3)});
  const auto e = jsr_estimate(S, 6);
  CHECK(e.lower == doctest::Approx(3));
  CHECK(e.upper == doctest::Approx(3));
  const auto b = bochi_bound(S);
  CHECK(b.d_m == 16);
  CHECK(b.c_m == doctest::Approx(8 * std::log(2.0) + 5 * std::log(2.0)));
  CHECK(b.value == doctest::Approx(std::exp(b.c_m) * 3));
  CHECK_FALSE(b.subsampled);
}

TEST_CASE("sandwich and Bochi ordering on random sets") {
  std::mt19937_64 rng(21);
  for (int m : {2, 3}) {
    for (int i = 0; i < 8; ++i) {
      const auto S = random_matrix_set<double>(rng, m, 2);
      const auto e = jsr_estimate(S, m == 2 ? 8 : 5);
      CHECK(e.lower <= e.upper + 1e-12);
      const auto b = bochi_bound(S, std::nullopt, m == 2 ? std::optional<int>{} : std::optional<int>{6});
      CHECK(b.value >= e.upper - 1e-9);
    }
  }
}

TEST_CASE("worker count does not change estimates") {
  std::mt19937_64 rng(22);
  const auto S = random_matrix_set<double>(rng, 3, 3);
  ProductOptions one, many;
  many.workers = 3;
  const auto a = jsr_estimate(S, 6, one);
  const auto b = jsr_estimate(S, 6, many);
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
}

TEST_CASE("budgets") {
  const MatrixSet<double> S({m2(1, 1, 0, 1), m2(1, 0, 1, 1)});
  ProductOptions tight;
  tight.budget = 1000;
  CHECK_THROWS_AS(jsr_estimate(S, 12, tight), Error);
  tight.samples_per_length = 50;
  const auto b = bochi_bound(S, std::nullopt, std::nullopt, tight);
  CHECK(b.subsampled);
  CHECK_THROWS_AS(MatrixSet<double>({m2(0, 0, 0, 0)}), Error);
  CHECK_THROWS_AS(MatrixSet<double>(std::vector<MatrixX<double>>{}), Error);
}

TEST_CASE("spectral radius never exceeds the operator norm") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const auto A = random_matrix_set<double>(rng, 2 + i % 3, 1)[0];
    CHECK(spectral_radius(A) <= operator_norm(A) + 1e-8);
  }
}

TEST_CASE("tree joint translation length equals half the max over S^2") {
  const auto d = MetricHandle::word(GeneratingSet::standard_basis(2));
  std::mt19937_64 rng(24);
  for (int i = 0; i < 20; ++i) {
    std::vector<ReducedWord> S;
    const int k = 1 + static_cast<int>(rng() % 4);
    for (int j = 0; j < k; ++j) S.push_back(random_reduced_word(rng, 2, 1 + static_cast<int>(rng() % 4)));
    double half = 0;
    for (const auto& s : S) {
      for (const auto& t : S) half = std::max(half, 0.5 * static_cast<double>(cyclic_reduce(multiply(s, t)).core.length()));
    }
    const auto e = joint_translation_length(d, S, 6);
    CHECK(e.lower <= half + 1e-9);
    CHECK(half <= e.upper + 1e-9);
  }
  const std::vector<ReducedWord> many(8, parse_word("a"));
  CHECK_THROWS_AS(joint_translation_length(d, many, 9, 1000), Error);
}

TEST_CASE("closed-form bounds") {
  CHECK(rigidity_bound_hyperbolic(4, 1, 0, 0).value == 2.0);
  CHECK(rigidity_bound_hyperbolic(10, 0, 1, 1, 3).value == doctest::Approx(2 * 3 * 1 / 6.0));
  CHECK(std::abs(rigidity_bound_anosov(32, 1, 0, 2).value - (13 * std::log(2.0) + 2)) <= 1e-12);
  CHECK(rigidity_bound_anosov(40, 1, 0, 2, 1.0, 4).value == doctest::Approx(4.0 / 36 + 40.0 / 36));
  CHECK_THROWS_AS(rigidity_bound_hyperbolic(2, 1, 0, 0), Error);
  CHECK_THROWS_AS(rigidity_bound_anosov(16, 1, 0, 2), Error);
  CHECK_THROWS_AS(rigidity_bound_anosov(32, 0, 0, 2), Error);

  const auto g = geometry_bounds(3, 2, 1, 2, 0.5, 1);
  CHECK(g.output("vol_bound") == doctest::Approx(2));
  CHECK(g.output("diam_bound") == doctest::Approx(8));
  CHECK(g.output("v_upper") == doctest::Approx(4));
  CHECK(g.output("delta") == doctest::Approx(2 * 2 * std::log(2.0)));
  CHECK(g.output("alpha") == doctest::Approx(4 * 17));
  CHECK_THROWS_AS(geometry_bounds(3, 1, 2, 1, 1, 1), Error);

  const auto b = butt_constants(2, 1, 1, 1, 1, 0.5, 0, 1, 1);
  CHECK(b.output("L_hat_star") == doctest::Approx(6));
  CHECK(b.output("L_hat") == doctest::Approx(4));
  CHECK(b.output("C") == doctest::Approx(24));
  CHECK(b.output("L0") == doctest::Approx(13));
  CHECK(b.output("P") == doctest::Approx(4));
  CHECK_THROWS_AS(butt_constants(2, 1, 1, 1, 1, 1.5, 0, 1, 1), Error);
  CHECK_THROWS_AS(b.output("missing"), Error);
  CHECK(bound_report_json(b).find("\"butt-constants\"") != std::string::npos);
}

TEST_CASE("domination of Schottky and parabolic representations") {
  const auto census = enumerate_elements(MetricHandle::word(GeneratingSet::standard_basis(2)), 6);
  const auto p = domination_profile(schottky_pair(4.0, std::numbers::pi / 4), census);
  CHECK(p.dominated);
  CHECK_FALSE(p.parabolic_generator);
  const Representation<double> par({m2(1, 1, 0, 1), m2(1, 0, 1, 1)});
  CHECK(domination_profile(par, census).parabolic_generator);
}
