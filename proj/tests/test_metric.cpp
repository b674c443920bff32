#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mls/error.hpp"
#include "mls/metric.hpp"
#include "oracles.hpp"

using namespace mls;

namespace {

MetricHandle basis() { return MetricHandle::word(GeneratingSet::standard_basis(2)); }

Automorphism phi() { return Automorphism({parse_word("a"), parse_word("ba")}, {parse_word("a"), parse_word("bA")}); }

}  // namespace

TEST_CASE("standard basis distance is word length") {
  const auto d = basis();
  CHECK(d.kind() == MetricKind::Word);
  CHECK(d.symmetric());
  CHECK(d.integer_valued());
  CHECK(d.delta() == 0);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto x = random_reduced_word(rng, 2, static_cast<int>(rng() % 12));
    CHECK(d.distance(x) == static_cast<double>(x.length()));
    CHECK(d.exact_translation_length(x).value() == static_cast<double>(cyclic_reduce(x).core.length()));
  }
}

TEST_CASE("generating sets are symmetrized and checked") {
  const auto S = GeneratingSet::from_words(2, {parse_word("a"), parse_word("b"), parse_word("ab")});
  CHECK(S.size() == 6);
  CHECK(S.contains(parse_word("BA")));
  CHECK(S.is_factor_closed());
  CHECK_FALSE(S.is_standard_basis());
  CHECK(S.max_length() == 2);
  CHECK_THROWS_AS(GeneratingSet::from_words(2, {parse_word("aa"), parse_word("b")}), Error);
  const auto T = GeneratingSet::from_words(2, {parse_word("a"), parse_word("b"), parse_word("aab")});
  CHECK_FALSE(T.is_factor_closed());
}

TEST_CASE("word metric distances agree with Cayley BFS") {
  for (const auto& gens : std::vector<std::vector<ReducedWord>>{
           {parse_word("a"), parse_word("b"), parse_word("ab")},
           {parse_word("a"), parse_word("b"), parse_word("aab")},
           {parse_word("a"), parse_word("b"), parse_word("aBa"), parse_word("bb")}}) {
    const auto d = MetricHandle::word(GeneratingSet::from_words(2, gens));
    const auto ball = oracle::cayley_ball(gens, 4);
    for (const auto& [w, dist] : ball) CHECK_MESSAGE(d.distance(w) == dist, to_string(w));
  }
}

TEST_CASE("pullback, combination and matrix metrics") {
  const auto d = basis();
  const auto pb = MetricHandle::pulled_back(phi(), d);
  const auto combo = MetricHandle::combination(2.0, d, 0.5, pb);
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const auto x = random_reduced_word(rng, 2, static_cast<int>(rng() % 10));
    const double phix = static_cast<double>(phi().apply(x).length());
    CHECK(pb.distance(x) == phix);
    CHECK(combo.distance(x) == doctest::Approx(2.0 * x.length() + 0.5 * phix));
    CHECK(pb.exact_translation_length(x).value() ==
          static_cast<double>(cyclic_reduce(phi().apply(x)).core.length()));
  }
  const auto rho = schottky_pair(4.0, std::numbers::pi / 4);
  const auto psi = MetricHandle::matrix_log_norm(rho);
  const auto sym = MetricHandle::symmetrized_matrix_log_norm(rho);
  CHECK(psi.distance(ReducedWord{}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(psi.distance(parse_word("a")) == doctest::Approx(std::log(4.0)));
  CHECK(sym.distance(parse_word("a")) == doctest::Approx(2 * std::log(4.0)));
  CHECK(psi.exact_translation_length(parse_word("ab")).value() ==
        doctest::Approx(std::log(spectral_radius(rho(parse_word("ab"))))));
}

TEST_CASE("translation brackets contain the exact value") {
  const auto d = basis();
  const auto pb = MetricHandle::pulled_back(phi(), d);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const auto x = random_reduced_word(rng, 2, 1 + static_cast<int>(rng() % 8));
    for (const auto* m : {&d, &pb}) {
      const auto exact = m->exact_translation_length(x).value();
      const auto b = translation_length_bracket(*m, x, 12);
      CHECK(b.contains(exact, 1e-12));
      CHECK(translation_length(*m, x).exact());
    }
  }
}

TEST_CASE("threshold generating sets satisfy the sandwich") {
  const auto d = basis();
  CHECK_THROWS_AS(threshold_generating_set(d, 1.0), Error);
  const auto S3 = threshold_generating_set(d, 3.0);
  CHECK(S3.size() == 2 * 27 - 2);
  std::mt19937_64 rng(14);
  for (int i = 0; i < 40; ++i) {
    const auto x = random_reduced_word(rng, 2, static_cast<int>(rng() % 15));
    const auto check = verify_sandwich(d, S3, 3.0, x);
    CHECK(check.holds);
    CHECK(check.word_length == static_cast<int>((x.length() + 2) / 3));
  }
}

TEST_CASE("coned-off distance shortcuts through the subgroup") {
  const std::vector<ReducedWord> gens{parse_word("a")};
  const auto H = stallings_build(2, gens);
  const auto S = GeneratingSet::standard_basis(2);
  CHECK(coned_off_distance(S, H, parse_word("aaaaa"), 6) == 2);
  CHECK(coned_off_distance(S, H, parse_word("a"), 6) == 1);
  CHECK(coned_off_distance(S, H, parse_word("b"), 6) == 1);
  CHECK(coned_off_distance(S, H, parse_word("baaaa"), 6) == 3);
  const auto m = MetricHandle::coned_off(S, H);
  CHECK(m.distance(parse_word("aaaa")) == 2);
}

TEST_CASE("four-point estimate vanishes on the tree") {
  CHECK(estimate_delta(basis(), 200, 3) == 0);
  const auto S = MetricHandle::word(GeneratingSet::from_words(2, {parse_word("a"), parse_word("b"), parse_word("ab")}));
  CHECK(S.delta() >= 0);
}
