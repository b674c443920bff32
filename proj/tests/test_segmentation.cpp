#include <random>

#include "doctest.h"
#include "mls/metric.hpp"
#include "mls/segmentation.hpp"
#include "oracles.hpp"

using namespace mls;

namespace {

std::vector<ReducedWord> factor_closed_prime() {
  return {parse_word("a"), parse_word("A"), parse_word("b"), parse_word("B"), parse_word("ab"), parse_word("BA")};
}

}  // namespace

TEST_CASE("segmentation length equals Cayley BFS distance for a factor-closed set") {
  const auto pieces = factor_closed_prime();
  const Segmenter seg(2, pieces);
  const auto ball = oracle::cayley_ball(pieces, 7);
  for (const auto& [w, d] : ball) {
    if (w.length() > 7) continue;
    CHECK_MESSAGE(seg.length(w.letters()) == d, to_string(w));
  }
}

TEST_CASE("segmentation of a larger factor-closed set matches BFS") {
  std::vector<ReducedWord> gens{parse_word("aab"), parse_word("b")};
  // Factor closure of {aab, b}: a, aa, ab, aab, b and inverses.
  for (const char* w : {"a", "aa", "ab"}) gens.push_back(parse_word(w));
  std::vector<ReducedWord> sym = gens;
  for (const auto& g : gens) sym.push_back(g.inverse());
  const Segmenter seg(2, sym);
  const auto ball = oracle::cayley_ball(sym, 5);
  int checked = 0;
  for (const auto& [w, d] : ball) {
    // Words of length <= 5 are all within 5 steps, so their distances are final.
    if (w.length() > 5) continue;
    CHECK(seg.length(w.letters()) == d);
    ++checked;
  }
  CHECK(checked == 1 + 4 + 12 + 36 + 108 + 324);
}

TEST_CASE("incremental extension matches the batch length") {
  const auto pieces = factor_closed_prime();
  const Segmenter seg(2, pieces);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto w = random_reduced_word(rng, 2, 1 + static_cast<int>(rng() % 12));
    std::vector<int> costs{0};
    for (std::size_t k = 1; k <= w.length(); ++k) {
      costs.push_back(seg.extend(w.letters().subspan(0, k), costs));
    }
    CHECK(costs.back() == seg.length(w.letters()));
  }
}

TEST_CASE("cyclic length is the limit of |x^n|/n") {
  const auto pieces = factor_closed_prime();
  const Segmenter seg(2, pieces);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 60; ++i) {
    const auto x = cyclic_reduce(random_reduced_word(rng, 2, 1 + static_cast<int>(rng() % 6))).core;
    const double ell = seg.cyclic_length(x.letters());
    // Subadditive: |x^n| / n decreases to ell and |x^n| >= n ell.
    for (int n : {1, 2, 4, 8}) {
      const double len = seg.length(power(x, n).letters());
      CHECK(len / n >= ell - 1e-12);
    }
    const double big = seg.length(power(x, 24).letters()) / 24.0;
    CHECK(big - ell <= 2.0 / 24 + 1e-12);
  }
}

TEST_CASE("unreachable words report the sentinel") {
  const std::vector<ReducedWord> pieces{parse_word("a"), parse_word("A")};
  const Segmenter seg(2, pieces);
  CHECK(seg.length(parse_word("ab").letters()) >= Segmenter::kUnreachable);
}
