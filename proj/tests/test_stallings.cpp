#include <set>

#include "doctest.h"
#include "mls/stallings.hpp"
#include "oracles.hpp"

using namespace mls;

namespace {

// Elements of H reachable as products of at most k generators; every member
// of length <= n appears once k is large enough for free generating sets
// whose Stallings graph has no cancellation beyond the obvious.
std::set<ReducedWord> products(const std::vector<ReducedWord>& gens, int k) {
  std::set<ReducedWord> all{ReducedWord{}};
  std::set<ReducedWord> frontier = all;
  for (int i = 0; i < k; ++i) {
    std::set<ReducedWord> next;
    for (const auto& x : frontier) {
      for (const auto& g : gens) {
        for (const auto& s : {g, g.inverse()}) {
          const auto y = multiply(x, s);
          if (all.insert(y).second) next.insert(y);
        }
      }
    }
    frontier = std::move(next);
  }
  return all;
}

}  // namespace

TEST_CASE("membership matches generator products on short words") {
  const std::vector<ReducedWord> gens{parse_word("a"), parse_word("baB")};
  const auto H = stallings_build(2, gens);
  CHECK(H.is_folded());
  CHECK(H.num_states() == 2);
  const auto members = products(gens, 8);
  for (int n = 0; n <= 6; ++n) {
    for (const auto& w : oracle::words_of_length(2, n)) {
      CHECK_MESSAGE(H.accepts(w) == members.count(w) > 0, to_string(w));
    }
  }
}

TEST_CASE("folding identifies shared prefixes") {
  const std::vector<ReducedWord> gens{parse_word("ab"), parse_word("aB")};
  const auto H = stallings_build(2, gens);
  CHECK(H.is_folded());
  CHECK(membership(H, parse_word("abbA")));
  CHECK_FALSE(membership(H, parse_word("a")));
}

TEST_CASE("cyclic subgroup and commutator-free cases") {
  const std::vector<ReducedWord> gens{parse_word("a")};
  const auto H = stallings_build(2, gens);
  CHECK(H.accepts(parse_word("aaaa")));
  CHECK(H.accepts(parse_word("AA")));
  CHECK_FALSE(H.accepts(parse_word("aba")));
}

TEST_CASE("right cosets agree exactly when the quotient lies in H") {
  const std::vector<ReducedWord> gens{parse_word("a"), parse_word("baB")};
  const auto H = stallings_build(2, gens);
  std::vector<ReducedWord> sample;
  for (int n = 0; n <= 3; ++n) {
    for (const auto& w : oracle::words_of_length(2, n)) sample.push_back(w);
  }
  for (const auto& u : sample) {
    for (const auto& v : sample) {
      // Hu = Hv iff u v^-1 in H.
      CHECK((H.right_coset(u) == H.right_coset(v)) == H.accepts(multiply(u, v.inverse())));
    }
  }
}
