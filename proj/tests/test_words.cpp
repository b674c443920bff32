#include <random>

#include "doctest.h"
#include "mls/error.hpp"
#include "mls/packed_word.hpp"
#include "mls/words.hpp"
#include "oracles.hpp"

using namespace mls;

TEST_CASE("parsing reduces and printing round-trips") {
  CHECK(to_string(parse_word("aAb")) == "b");
  CHECK(to_string(parse_word("abBA")) == "1");
  CHECK(parse_word("1").empty());
  CHECK(parse_word("").empty());
  CHECK(to_string(parse_word("aBc")) == "aBc");
  CHECK_THROWS_AS(parse_word(Alphabet(2), "c"), Error);
  CHECK_THROWS_AS(parse_word("a1b"), Error);
}

TEST_CASE("letter order is a < A < b < B and shortlex on words") {
  CHECK(parse_letter('a') < parse_letter('A'));
  CHECK(parse_letter('A') < parse_letter('b'));
  CHECK(parse_word("B") < parse_word("aa"));
  CHECK(parse_word("ab") < parse_word("aB"));
}

TEST_CASE("group laws hold on random words") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto x = random_reduced_word(rng, 3, static_cast<int>(rng() % 9));
    const auto y = random_reduced_word(rng, 3, static_cast<int>(rng() % 9));
    const auto z = random_reduced_word(rng, 3, static_cast<int>(rng() % 9));
    CHECK(multiply(x, x.inverse()).empty());
    CHECK(multiply(multiply(x, y), z) == multiply(x, multiply(y, z)));
    CHECK(multiply(x, y).inverse() == multiply(y.inverse(), x.inverse()));
    CHECK(power(x, 3) == multiply(x, multiply(x, x)));
    CHECK(power(x, -1) == x.inverse());
  }
}

TEST_CASE("random reduced words have the requested length") {
  std::mt19937_64 rng(2);
  for (int n = 0; n < 12; ++n) CHECK(random_reduced_word(rng, 2, n).length() == static_cast<std::size_t>(n));
}

TEST_CASE("conjugacy normal form is invariant under conjugation") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto x = random_reduced_word(rng, 2, 1 + static_cast<int>(rng() % 8));
    const auto g = random_reduced_word(rng, 2, static_cast<int>(rng() % 6));
    const auto cr = cyclic_reduce(x);
    CHECK(conjugate(cr.core, cr.conjugator) == x);
    CHECK(conjugacy_class(conjugate(x, g)) == conjugacy_class(x));
    CHECK(conjugacy_class(x).word() == oracle::min_rotation(cr.core));
  }
}

TEST_CASE("least rotation agrees with brute force") {
  for (int n = 1; n <= 6; ++n) {
    for (const auto& w : oracle::words_of_length(2, n)) {
      if (!oracle::cyclically_reduced(w)) continue;
      const auto r = least_rotation(w.letters());
      std::vector<Letter> rotated(w.letters().begin(), w.letters().end());
      std::rotate(rotated.begin(), rotated.begin() + static_cast<long>(r), rotated.end());
      CHECK(ReducedWord::from_reduced(rotated) == oracle::min_rotation(w));
    }
  }
}

TEST_CASE("cyclically reduced length is the class length") {
  CHECK(conjugacy_class(parse_word("baB")).word() == parse_word("a"));
  CHECK(conjugacy_class(parse_word("abAB")).length() == 4);
  CHECK(conjugacy_class(parse_word("aabAA")).word() == parse_word("b"));
}

TEST_CASE("abelianization counts signed exponents") {
  CHECK(abelianize(parse_word("aabA"), 2) == std::vector<int>{1, 1});
  CHECK(abelianize(parse_word("abAB"), 2) == std::vector<int>{0, 0});
  CHECK(abelianize(parse_word("BBc"), 3) == std::vector<int>{0, -2, 1});
}

TEST_CASE("automorphisms round-trip and bad inverses are rejected") {
  const Automorphism phi({parse_word("a"), parse_word("ba")}, {parse_word("a"), parse_word("bA")});
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto x = random_reduced_word(rng, 2, static_cast<int>(rng() % 10));
    CHECK(phi.apply_inverse(phi.apply(x)) == x);
    CHECK(phi.inverse().apply(phi.apply(x)) == x);
  }
  CHECK(phi.apply(parse_word("b")) == parse_word("ba"));
  CHECK_THROWS_AS(Automorphism({parse_word("a"), parse_word("ba")}, {parse_word("a"), parse_word("b")}), Error);
  CHECK(Automorphism::identity(3).apply(parse_word("abc")) == parse_word("abc"));
}

TEST_CASE("packed words round-trip up to 32 letters") {
  std::mt19937_64 rng(5);
  for (int n : {0, 1, 15, 16, 17, 31, 32}) {
    const auto w = random_reduced_word(rng, 2, n);
    const auto p = PackedWord::pack(w);
    CHECK(p.unpack() == w);
    CHECK(p.length() == static_cast<std::size_t>(n));
  }
  CHECK_THROWS_AS(PackedWord::pack(random_reduced_word(rng, 2, 33)), Error);
}
