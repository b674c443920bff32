#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "mls/census.hpp"
#include "mls/enumerate.hpp"
#include "mls/error.hpp"
#include "oracles.hpp"

using namespace mls;

namespace {

MetricHandle basis() { return MetricHandle::word(GeneratingSet::standard_basis(2)); }

MetricHandle prime() {
  return MetricHandle::word(GeneratingSet::from_words(2, {parse_word("a"), parse_word("b"), parse_word("ab")}));
}

Automorphism phi() { return Automorphism({parse_word("a"), parse_word("ba")}, {parse_word("a"), parse_word("bA")}); }

std::vector<std::uint64_t> oracle_ball_counts(const std::vector<ReducedWord>& gens, int radius) {
  std::vector<std::uint64_t> spheres(static_cast<std::size_t>(radius) + 1, 0);
  for (const auto& [w, d] : oracle::cayley_ball(gens, radius)) spheres[static_cast<std::size_t>(d)] += 1;
  for (std::size_t i = 1; i < spheres.size(); ++i) spheres[i] += spheres[i - 1];
  return spheres;
}

std::vector<std::uint64_t> Ns(const CountingSequence& c) {
  std::vector<std::uint64_t> out;
  for (const auto& p : c) out.push_back(p.N);
  return out;
}

}  // namespace

TEST_CASE("ball counts match closed forms and BFS") {
  const auto c = count_ball(basis(), 8);
  REQUIRE(c.size() == 9);
  for (int T = 0; T <= 8; ++T) CHECK(c[static_cast<std::size_t>(T)].N == 2 * static_cast<std::uint64_t>(std::pow(3, T)) - 1);
  const auto sph = sphere_sizes(c);
  for (int T = 1; T <= 8; ++T) CHECK(sph[static_cast<std::size_t>(T)] == 4 * static_cast<std::uint64_t>(std::pow(3, T - 1)));

  const std::vector<ReducedWord> g1{parse_word("a"), parse_word("b"), parse_word("ab")};
  CHECK(Ns(count_ball(prime(), 5)) == oracle_ball_counts(g1, 5));
  const std::vector<ReducedWord> g2{parse_word("a"), parse_word("b"), parse_word("aab")};
  const auto nonclosed = MetricHandle::word(GeneratingSet::from_words(2, g2));
  CHECK(Ns(count_ball(nonclosed, 4)) == oracle_ball_counts(g2, 4));
}

TEST_CASE("pullback balls are images of the inner ball") {
  const auto pb = MetricHandle::pulled_back(phi(), basis());
  CHECK(Ns(count_ball(pb, 7)) == Ns(count_ball(basis(), 7)));
  const auto census = enumerate_elements(pb, 5);
  for (const auto& row : census.rows) {
    CHECK(row.d == static_cast<double>(phi().apply(row.word.unpack()).length()));
  }
}

TEST_CASE("combination balls match brute force") {
  const std::vector<ReducedWord> g{parse_word("a"), parse_word("b"), parse_word("ab")};
  const auto combo = MetricHandle::combination(0.5, basis(), 0.5, prime());
  // |x|_S' >= |x|/2, so d >= 3|x|/4 and the radius-5 ball lies within length 6.
  const auto prime_ball = oracle::cayley_ball(g, 6);
  std::uint64_t brute = 0;
  for (const auto& [w, d] : prime_ball) {
    if (w.length() <= 6 && 0.5 * static_cast<double>(w.length()) + 0.5 * d <= 5 + 1e-12) ++brute;
  }
  CHECK(count_ball(combo, 5).back().N == brute);
}

TEST_CASE("combinations with a pullback part are not ball-enumerable") {
  const auto pb = MetricHandle::pulled_back(phi(), basis());
  CHECK_FALSE(is_enumerable(MetricHandle::combination(1, basis(), 1, pb)));
}

TEST_CASE("enumeration does not depend on the worker count") {
  EnumOptions one;
  EnumOptions many;
  many.workers = 4;
  const auto a = enumerate_joint_elements(basis(), prime(), 6, one);
  const auto b = enumerate_joint_elements(basis(), prime(), 6, many);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].word == b.rows[i].word);
    CHECK(a.rows[i].d_star == b.rows[i].d_star);
  }
  std::ostringstream sa, sb;
  write_census_csv(sa, a);
  write_census_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("element,d,d_star\n", 0) == 0);
}

TEST_CASE("row limit raises budget errors") {
  EnumOptions tight;
  tight.max_rows = 100;
  CHECK_THROWS_AS(enumerate_elements(basis(), 8, tight), Error);
}

TEST_CASE("basis conjugacy census matches necklace brute force") {
  const auto census = enumerate_conjugacy(basis(), 7);
  CHECK(census.exact);
  std::vector<std::uint64_t> by_length(8, 0);
  for (const auto& r : census.rows) {
    CHECK(r.ell.exact());
    CHECK(r.ell.lower == static_cast<double>(r.cls.length()));
    by_length[r.cls.length()] += 1;
  }
  for (int n = 1; n <= 7; ++n) {
    std::set<ReducedWord> classes;
    for (const auto& w : oracle::words_of_length(2, n)) {
      if (oracle::cyclically_reduced(w)) classes.insert(oracle::min_rotation(w));
    }
    CHECK_MESSAGE(by_length[static_cast<std::size_t>(n)] == classes.size(), n);
  }
  CHECK(by_length[0] == 0);
  for (std::size_t i = 1; i < census.rows.size(); ++i) CHECK(census.rows[i - 1].cls < census.rows[i].cls);
}

TEST_CASE("pullback class lengths are exact images") {
  const auto pb = MetricHandle::pulled_back(phi(), basis());
  const auto census = enumerate_joint_conjugacy(basis(), pb, 6);
  CHECK(census.joint);
  for (const auto& r : census.rows) {
    REQUIRE(r.ell_star);
    CHECK(r.ell_star->lower == static_cast<double>(conjugacy_class(phi().apply(r.cls.word())).length()));
  }
}

TEST_CASE("filters agree with direct predicates") {
  const auto commutator = count_ball(basis(), 6, Filter::commutator_subgroup());
  const auto homology = count_ball(basis(), 6, Filter::homology_class({1, 0}));
  const std::vector<ReducedWord> gens{parse_word("a"), parse_word("baB")};
  const auto H = stallings_build(2, gens);
  const auto sub = count_ball(basis(), 6, Filter::subgroup(H));
  std::uint64_t c = 0, h = 0, s = 0;
  for (int n = 0; n <= 6; ++n) {
    for (const auto& w : oracle::words_of_length(2, n)) {
      const auto ab = abelianize(w, 2);
      c += ab == std::vector<int>{0, 0};
      h += ab == std::vector<int>{1, 0};
      s += H.accepts(w);
    }
  }
  CHECK(commutator.back().N == c);
  CHECK(homology.back().N == h);
  CHECK(sub.back().N == s);
  CHECK_THROWS_AS(Filter::tolerance(1.0, 1.0), Error);
}

TEST_CASE("equality filters need exact lengths") {
  // Supplied delta: the four-point estimate would need a large BFS ball.
  MetricOptions opt;
  opt.delta = 1.0;
  const auto nonclosed = MetricHandle::word(
      GeneratingSet::from_words(2, {parse_word("a"), parse_word("b"), parse_word("aab")}), opt);
  EnumOptions shallow;
  shallow.bracket_depth = 2;
  const auto census = enumerate_joint_conjugacy(basis(), nonclosed, 2, shallow);
  bool any_bracket = false;
  for (const auto& r : census.rows) any_bracket = any_bracket || !r.ell_star->exact();
  CHECK(any_bracket);
  CHECK_THROWS_AS(correlation_census(census, Filter::equality(1, 1)), Error);
  const auto exact = enumerate_joint_conjugacy(basis(), basis(), 5);
  const auto all = correlation_census(exact, Filter::equality(1, 1));
  CHECK(all.back().N == exact.rows.size());
}

TEST_CASE("growth estimates on synthetic sequences") {
  CountingSequence geo;
  for (int T = 0; T <= 12; ++T) geo.push_back({double(T), 2 * static_cast<std::uint64_t>(std::pow(3, T)) - 1});
  const auto g = growth_rate(geo);
  CHECK(g.annulus == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(g.rate == g.annulus);
  CHECK(g.method == "annulus-ratio");
  CHECK(g.window_min == 8);
  CHECK(g.window_max == 12);

  CountingSequence poly;
  for (int T = 6; T <= 24; ++T) {
    poly.push_back({double(T), static_cast<std::uint64_t>(std::llround(1e6 * std::exp(0.8 * T) * std::pow(T, -1.5)))});
  }
  const auto p = growth_rate(poly, 8);
  CHECK(p.corrected_fit == doctest::Approx(0.8).epsilon(1e-4));
  CHECK(p.prefactor == doctest::Approx(1.5).epsilon(1e-3));

  const CountingSequence flat{{0, 5}, {1, 5}, {2, 5}};
  CHECK(growth_rate(flat).degenerate);
  const CountingSequence short_seq{{0, 1}, {1, 2}};
  CHECK_THROWS_AS(growth_rate(short_seq), Error);

  // Parity gaps: annuli empty at odd radii are bridged.
  CountingSequence even;
  std::uint64_t n = 1;
  for (int T = 0; T <= 12; ++T) {
    if (T > 0 && T % 2 == 0) n += static_cast<std::uint64_t>(std::pow(3, T));
    even.push_back({double(T), n});
  }
  CHECK(growth_rate(even).annulus == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("restricted growth reports empty filters") {
  const auto census = enumerate_elements(basis(), 4);
  CHECK_THROWS_AS(restricted_growth(census, Filter::homology_class({9, 9})), Error);
  const auto all = restricted_growth(census, Filter::all());
  CHECK(all.annulus == doctest::Approx(std::log(3.0)));
}

TEST_CASE("conjugate counts in balls") {
  const auto d = basis();
  const auto c = conjugate_count_bound_check(d, parse_word("a"), 3, 2.0, std::log(3.0));
  CHECK(c.count == 3);  // a, bab^-1, b^-1ab
  CHECK(c.ell == 1);
  CHECK(c.holds);
  const auto zero = conjugate_count_bound_check(d, parse_word("ab"), 1, 2.0, std::log(3.0));
  CHECK(zero.count == 0);
  CHECK(zero.holds);
  // Brute count of conjugates of ab within radius 4.
  std::set<ReducedWord> conj;
  for (int n = 0; n <= 4; ++n) {
    for (const auto& w : oracle::words_of_length(2, n)) {
      if (conjugacy_class(w) == conjugacy_class(parse_word("ab"))) conj.insert(w);
    }
  }
  CHECK(conjugate_count_bound_check(d, parse_word("ab"), 4, 2.0, std::log(3.0)).count == conj.size());
}

TEST_CASE("joint histograms and intersection numbers") {
  const auto h = joint_histogram(basis(), basis(), 12);
  CHECK(h.total() == 2 * 531441 - 1);
  const auto tau = intersection_number(h);
  CHECK(tau.tau >= 0.9);
  CHECK(tau.tau <= 1.0);
  const auto census = enumerate_joint_elements(basis(), prime(), 5);
  const auto h2 = joint_histogram(census);
  CHECK(h2.total() == census.rows.size());
  CHECK(intersection_number(h2).tau == doctest::Approx(intersection_number(census).tau));
}

TEST_CASE("counts CSV schema") {
  std::ostringstream os;
  write_counts_csv(os, count_ball(basis(), 2));
  CHECK(os.str() == "T,N\n0,1\n1,5\n2,17\n");
  CHECK(format_double(std::nan("")) == "");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("coned-off and matrix metrics are not ball-enumerable") {
  const std::vector<ReducedWord> gens{parse_word("a")};
  const auto coned = MetricHandle::coned_off(GeneratingSet::standard_basis(2), stallings_build(2, gens));
  CHECK_FALSE(is_enumerable(coned));
  CHECK_THROWS_AS(count_ball(coned, 3), Error);
  CHECK(is_enumerable(prime()));
}
