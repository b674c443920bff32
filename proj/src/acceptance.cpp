#include "mls/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "mls/census.hpp"
#include "mls/manhattan.hpp"
#include "mls/report.hpp"
#include "mls/spectral.hpp"

namespace mls {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const double kLog3 = std::log(3.0);

MetricHandle standard() { return MetricHandle::word(GeneratingSet::standard_basis(2)); }

MetricHandle s_prime() {
  return MetricHandle::word(GeneratingSet::from_words(2, {parse_word("a"), parse_word("b"), parse_word("ab")}));
}

Automorphism criterion5_phi() {
  return Automorphism({parse_word("a"), parse_word("ba")}, {parse_word("a"), parse_word("bA")});
}

EnumOptions enum_options(int workers) {
  EnumOptions o;
  o.workers = workers;
  return o;
}

// Pass/fail plus a JSON record of the numbers behind it.
struct Outcome {
  bool pass = true;
  std::string detail;
  Json data = Json::object();

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [violated]");
  }
};

CriterionResult finish(int id, const std::string& name, const Outcome& o, const fs::path& out) {
  Json j;
  j["id"] = id;
  j["name"] = name;
  j["pass"] = o.pass;
  j["detail"] = o.detail;
  j["data"] = o.data;
  char file[32];
  std::snprintf(file, sizeof file, "c%02d_report.json", id);
  write_file(out / file, dump(j));
  return {id, name, o.pass, o.detail};
}

// Runs one criterion; a library error fails it with the error text.
template <typename Fn>
CriterionResult run_criterion(int id, const std::string& name, const fs::path& out, Fn&& fn) {
  Outcome o;
  try {
    fn(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("error: ") + e.what();
  }
  return finish(id, name, o, out);
}

// Growth figure of a counting sequence used in the comparisons. Class counts
// carry a polynomial prefactor and use the corrected fit; element balls use
// the annulus ratio.
double class_growth(const GrowthEstimate& g) { return g.corrected_fit; }

void criterion1(Outcome& o, const fs::path& out, int workers) {
  const auto S = standard();
  const auto counts = count_ball(S, 12, Filter::all(), enum_options(workers));
  write_file(out / "c01_counts.csv", counts_csv(counts));
  const auto spheres = sphere_sizes(counts);
  bool closed = counts.size() == 13;
  for (int T = 1; closed && T <= 12; ++T) {
    const auto t = static_cast<std::size_t>(T);
    const auto ball = static_cast<std::uint64_t>(2 * std::pow(3.0, T) - 1);
    const auto sphere = static_cast<std::uint64_t>(4 * std::pow(3.0, T - 1));
    closed = counts[t].N == ball && spheres[t] == sphere;
  }
  o.check(closed, "ball 2*3^T-1 and sphere 4*3^(T-1) for T<=12");

  // Independent oracle: plain BFS in the Cayley graph.
  std::vector<std::uint64_t> bfs_spheres(13, 0);
  for (const auto& [w, d] : S.bfs_ball(12)) bfs_spheres[static_cast<std::size_t>(d)] += 1;
  o.check(std::equal(bfs_spheres.begin(), bfs_spheres.end(), spheres.begin(), spheres.end()),
          "BFS sphere sizes agree");

  const auto g = growth_rate(counts);
  write_file(out / "c01_growth.json", dump(to_json(g)));
  o.check(std::abs(g.annulus - kLog3) <= 1e-9, "annulus " + fmt(g.annulus) + " vs log 3 within 1e-9");
  o.data["annulus"] = g.annulus;
}

void criterion2(Outcome& o, const fs::path& out, int workers) {
  const auto S = standard();
  const auto h = joint_histogram(S, S, 12, enum_options(workers));
  const auto grid = uniform_grid(0, kLog3, 21);
  const auto curve = sample_theta(h, grid, kLog3);
  write_file(out / "c02_curve.csv", curve_csv(curve));
  double worst = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::abs(curve.theta[i] - (kLog3 - grid[i])));
  o.check(worst <= 0.02, "max |theta - (v - a)| " + fmt(worst) + " <= 0.02");
  const auto b = beta(curve);
  write_file(out / "c02_beta.json", dump(to_json(b)));
  o.check(b.beta <= 0.01, "beta " + fmt(b.beta) + " <= 0.01");
  o.data["max_deviation"] = worst;
  o.data["beta"] = b.beta;
}

struct PairCurves {
  CurveSamples curve;
  BetaReport report;
  double v_star = 0;
};

// Curve and beta of (S, S') at radius 12; shared by criteria 3 and 4.
PairCurves pair_curves(const fs::path& out, int workers) {
  PairCurves p;
  const auto Sp = s_prime();
  const auto gs = growth_rate(count_ball(Sp, 10, Filter::all(), enum_options(workers)));
  p.v_star = gs.annulus;
  const auto h = joint_histogram(standard(), Sp, 12, enum_options(workers));
  p.curve = sample_theta(h, uniform_grid(0, p.v_star, 41), p.v_star);
  write_file(out / "c03_curve.csv", curve_csv(p.curve));
  p.report = beta(p.curve);
  return p;
}

void criterion3(Outcome& o, const PairCurves& p, const fs::path& out) {
  const auto& c = p.curve;
  write_file(out / "c03_curve.json", dump(to_json(c)));
  o.check(std::abs(c.theta.front() - kLog3) <= 0.05, "theta(0) " + fmt(c.theta.front()) + " vs v_d");
  o.check(std::abs(c.theta.back()) <= 0.05, "theta(v*) " + fmt(c.theta.back()) + " vs 0");
  o.check(c.convex, "convexity defect " + fmt(c.max_convexity_defect) + " within 1e-3 + 2 stderr");
  const double mid = p.v_star / 2;
  const double line = c.theta.front() + (c.theta.back() - c.theta.front()) * 0.5;
  const double gap = line - c.at(mid);
  o.check(gap >= 0.01, "line minus theta at midpoint " + fmt(gap) + " >= 0.01");
  o.data["theta0"] = c.theta.front();
  o.data["theta_v_star"] = c.theta.back();
  o.data["midpoint_gap"] = gap;
}

void criterion4(Outcome& o, PairCurves& p, const fs::path& out, int workers) {
  // Transposed curve on the S' ball; S' spheres grow as 4^T, so radius 10.
  const auto h = joint_histogram(s_prime(), standard(), 10, enum_options(workers));
  const auto transposed = sample_theta(h, uniform_grid(0, kLog3, 41), kLog3);
  write_file(out / "c04_curve_transposed.csv", curve_csv(transposed));
  const auto bt = beta(transposed);

  const auto census = enumerate_joint_conjugacy(standard(), s_prime(), 12, enum_options(workers));
  const auto dil = dilation(census);
  attach_dilation(p.report, dil);
  write_file(out / "c04_beta.json", dump(to_json(p.report)));
  write_file(out / "c04_dilation.json", dump(to_json(dil)));
  const double sym = std::abs(p.report.beta_bar - bt.beta_bar);
  o.check(sym <= 0.02, "|beta_bar - transposed| " + fmt(sym) + " <= 0.02");
  const auto bc = check_bounds(p.report, 0.02);
  o.check(bc.beta_ok, "beta_bar " + fmt(p.report.beta_bar) + " <= tanh(Delta/4) " + fmt(bc.tanh_bound) + " + 0.02");
  o.check(bc.alpha_ok, "alpha_sym " + fmt(p.report.alpha_sym) + " >= " + fmt(bc.alpha_bound) + " - 0.02");
  o.data["beta_bar"] = p.report.beta_bar;
  o.data["beta_bar_transposed"] = bt.beta_bar;
  o.data["delta_thurston"] = dil.delta();
}

void criterion5(Outcome& o, const fs::path& out, int workers) {
  const auto S = standard();
  const auto Sphi = MetricHandle::pulled_back(criterion5_phi(), S);
  const double v = growth_rate(count_ball(S, 12, Filter::all(), enum_options(workers))).annulus;
  const double v_star = growth_rate(count_ball(Sphi, 12, Filter::all(), enum_options(workers))).annulus;
  const auto h = joint_histogram(S, Sphi, 12, enum_options(workers));
  const auto curve = sample_theta(h, uniform_grid(0, v_star, 41), v_star);
  write_file(out / "c05_curve.csv", curve_csv(curve));
  const auto b = beta(curve);
  write_file(out / "c05_beta.json", dump(to_json(b)));

  const auto census = enumerate_joint_conjugacy(S, Sphi, 12, enum_options(workers));
  const auto E = correlation_census(census, Filter::equality(v, v_star));
  write_file(out / "c05_counts.csv", counts_csv(E));
  const auto g = growth_rate(E);
  write_file(out / "c05_growth.json", dump(to_json(g)));
  const double rate = class_growth(g);
  const double target = v - b.beta;
  o.check(rate <= target + 0.05, "v_d(E) " + fmt(rate) + " <= v - beta + 0.05 = " + fmt(target + 0.05));
  o.check(rate >= target - 0.15, "v_d(E) >= v - beta - 0.15 = " + fmt(target - 0.15));
  o.detail += "; annulus " + fmt(g.annulus) + ", prefactor " + fmt(g.prefactor);
  o.data["v"] = v;
  o.data["v_star"] = v_star;
  o.data["beta"] = b.beta;
  o.data["rate"] = rate;
  o.data["annulus"] = g.annulus;
}

void criterion6(Outcome& o, const fs::path& out, int workers) {
  const auto S = standard();
  const auto elements = count_ball(S, 14, Filter::all(), enum_options(workers));
  const auto ge = growth_rate(elements);
  const auto census = enumerate_conjugacy(S, 14, enum_options(workers));
  const auto classes = class_counts(census);
  write_file(out / "c06_element_counts.csv", counts_csv(elements));
  write_file(out / "c06_class_counts.csv", counts_csv(classes));
  const auto gc = growth_rate(classes);
  Json j;
  j["elements"] = to_json(ge);
  j["classes"] = to_json(gc);
  write_file(out / "c06_growth.json", dump(j));
  const double diff = std::abs(class_growth(gc) - ge.annulus);
  o.check(diff <= 0.05, "class " + fmt(class_growth(gc)) + " vs element " + fmt(ge.annulus) + " differ by " +
                            fmt(diff) + " <= 0.05");
  o.detail += "; class annulus " + fmt(gc.annulus);
  o.data["element_rate"] = ge.annulus;
  o.data["class_rate"] = class_growth(gc);
}

void criterion7(Outcome& o, const fs::path& out, int workers) {
  const auto S = standard();
  const auto commutator = count_ball(S, 14, Filter::commutator_subgroup(), enum_options(workers));
  const auto homology = count_ball(S, 14, Filter::homology_class({1, 0}), enum_options(workers));
  write_file(out / "c07_commutator_counts.csv", counts_csv(commutator));
  write_file(out / "c07_homology_counts.csv", counts_csv(homology));
  const auto gc = growth_rate(commutator);
  const auto gh = growth_rate(homology);
  o.check(gc.annulus >= kLog3 - 0.15, "zero abelianization " + fmt(gc.annulus) + " >= log 3 - 0.15");
  o.check(gh.annulus >= kLog3 - 0.15, "homology class of a " + fmt(gh.annulus) + " >= log 3 - 0.15");
  o.data["commutator"] = gc.annulus;
  o.data["homology_a"] = gh.annulus;
}

void criterion8(Outcome& o, const fs::path& out, int workers) {
  const auto S = standard();
  const std::vector<ReducedWord> cyclic{parse_word("a")};
  const std::vector<ReducedWord> rank2{parse_word("a"), parse_word("baB")};
  const auto c1 = count_ball(S, 14, Filter::subgroup(stallings_build(2, cyclic)), enum_options(workers));
  const auto c2 = count_ball(S, 14, Filter::subgroup(stallings_build(2, rank2)), enum_options(workers));
  write_file(out / "c08_cyclic_counts.csv", counts_csv(c1));
  write_file(out / "c08_rank2_counts.csv", counts_csv(c2));
  const double g1 = growth_rate(c1).annulus;
  const double g2 = growth_rate(c2).annulus;
  o.check(g1 <= 0.2, "<a> " + fmt(g1) + " <= 0.2");
  o.check(g2 <= kLog3 - 0.1, "<a, bab^-1> " + fmt(g2) + " <= log 3 - 0.1");
  o.data["cyclic"] = g1;
  o.data["rank2"] = g2;
}

void criterion9(Outcome& o, const fs::path& out) {
  const auto S = standard();
  Json rows = Json::array();
  bool all = true;
  int checked = 0;
  for (const char* x : {"a", "ab", "aab"}) {
    for (int T = 1; T <= 8; ++T) {
      const auto c = conjugate_count_bound_check(S, parse_word(x), T, 2.0, kLog3);
      Json r = to_json(c);
      r["x"] = x;
      r["T"] = T;
      rows.push_back(r);
      all = all && c.holds;
      ++checked;
    }
  }
  write_file(out / "c09_conjugates.json", dump(rows));
  o.check(all, std::to_string(checked) + " (x, T) pairs satisfy the conjugate count bound with C = 2");
}

void criterion10(Outcome& o, const fs::path& out, int workers, std::uint64_t seed) {
  std::seed_seq seq{seed, std::uint64_t{10}};
  std::mt19937_64 rng(seq);
  ProductOptions po;
  po.workers = workers;
  po.seed = seed;
  Json sets = Json::array();
  bool sandwich = true;
  bool bochi = true;
  for (int i = 0; i < 20; ++i) {
    const auto S = random_matrix_set<double>(rng, 2, 2);
    const auto e = jsr_estimate(S, 8, po);
    const auto b = bochi_bound(S, std::nullopt, std::nullopt, po);
    sandwich = sandwich && e.lower <= e.upper;
    bochi = bochi && b.value >= e.upper - 1e-9;
    Json j;
    j["jsr"] = to_json(e);
    j["bochi"] = to_json(b);
    sets.push_back(j);
  }
  write_file(out / "c10_jsr.json", dump(sets));
  o.check(sandwich, "jsr lower <= upper on 20 sets");
  o.check(bochi, "Bochi bound >= jsr upper - 1e-9 on 20 sets");
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const int m = 2 + i % 3;
    const auto A = random_matrix_set<double>(rng, m, 1)[0];
    worst = std::max(worst, spectral_radius(A) - operator_norm(A));
  }
  o.check(worst <= 1e-8, "lambda_1 - norm <= " + fmt(worst) + " on 100 matrices");
  o.data["max_radius_minus_norm"] = worst;
}

void criterion11(Outcome& o, const fs::path& out, std::uint64_t seed) {
  std::seed_seq seq{seed, std::uint64_t{11}};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_int_distribution<int> length(1, 4);
  const auto d = standard();
  Json rows = Json::array();
  bool all = true;
  for (int i = 0; i < 20; ++i) {
    std::vector<ReducedWord> S;
    const int k = count(rng);
    for (int j = 0; j < k; ++j) S.push_back(random_reduced_word(rng, 2, length(rng)));
    double half = 0;
    for (const auto& s : S) {
      for (const auto& t : S) half = std::max(half, 0.5 * static_cast<double>(cyclic_reduce(multiply(s, t)).core.length()));
    }
    const auto e = joint_translation_length(d, S, 6);
    const bool inside = half >= e.lower - 1e-9 && half <= e.upper + 1e-9;
    all = all && inside;
    Json j;
    Json words = Json::array();
    for (const auto& s : S) words.push_back(to_string(s));
    j["S"] = words;
    j["half_max_square"] = half;
    j["sandwich"] = to_json(e);
    rows.push_back(j);
  }
  write_file(out / "c11_tree.json", dump(rows));
  o.check(all, "depth-6 sandwich contains half the max translation length over S^2 for 20 sets");
}

void criterion12(Outcome& o, const fs::path& out, int workers) {
  const auto psi = MetricHandle::matrix_log_norm(schottky_pair(4.0, std::numbers::pi / 4));
  const auto census = enumerate_joint_conjugacy(standard(), psi, 8, enum_options(workers));
  const auto dil = dilation(census);
  const std::vector<ReducedWord> S{parse_word("a"), parse_word("A"), parse_word("b"), parse_word("B")};
  const auto e = joint_translation_length(psi, S, 6);
  Json j;
  j["dilation"] = to_json(dil);
  j["sandwich"] = to_json(e);
  write_file(out / "c12_schottky.json", dump(j));
  // Census interval for Dil(psi, d_S): d* = psi, so the b-over-a ratios.
  const double lo = dil.dil_ba;
  const double hi = dil.dil_ba_upper;
  const bool overlap = lo <= e.upper + 1e-9 && e.lower <= hi + 1e-9;
  o.check(overlap, "census [" + fmt(lo) + ", " + fmt(hi) + "] overlaps sandwich [" + fmt(e.lower) + ", " +
                       fmt(e.upper) + "]");
}

void criterion13(Outcome& o, const fs::path& out) {
  Json reports = Json::array();
  const auto h = rigidity_bound_hyperbolic(4, 1, 0, 0);
  reports.push_back(to_json(h));
  o.check(h.value == 2.0, "hyperbolic " + fmt(h.value) + " == 2");

  const auto a = rigidity_bound_anosov(32, 1, 0, 2);
  reports.push_back(to_json(a));
  const double expected = 13 * std::log(2.0) + 2;
  o.check(std::abs(a.value - expected) <= 1e-12, "anosov " + fmt(a.value) + " vs 13 log 2 + 2");

  // lambda = Lambda = 1, n = 2, ||Gamma|| = C_n = i_g = 1: vol 1, diam 1.
  const auto g = geometry_bounds(2, 1, 1, 1, 1, 1);
  reports.push_back(to_json(g));
  const double ln2 = std::log(2.0);
  const bool geo = std::abs(g.output("vol_bound") - 1) <= 1e-12 && std::abs(g.output("diam_bound") - 1) <= 1e-12 &&
                   std::abs(g.output("delta") - ln2) <= 1e-12 && std::abs(g.output("alpha") - 3) <= 1e-12 &&
                   std::abs(g.output("v_lower") - 1) <= 1e-12 && std::abs(g.output("v_upper") - 1) <= 1e-12;
  o.check(geo, "geometry plug-in (delta log 2, alpha 3, v in [1, 1])");

  // eps0 = 1/2, K = 0, R = 1 and unit inputs: L* = 6, L = 4.
  const auto b = butt_constants(2, 1, 1, 1, 1, 0.5, 0, 1, 1);
  reports.push_back(to_json(b));
  const std::vector<std::pair<const char*, double>> want{{"L_hat_star", 6}, {"L_hat", 4}, {"C_lower", 24},
                                                         {"C_upper", 12},   {"C", 24},     {"L0", 13},
                                                         {"P", 4}};
  bool butt = true;
  for (const auto& [k, v] : want) butt = butt && std::abs(b.output(k) - v) <= 1e-12;
  o.check(butt, "manifold constants plug-in (L* 6, L 4, C 24, L0 13, P 4)");
  write_file(out / "c13_bounds.json", dump(reports));
}

std::vector<fs::path> regular_files(const fs::path& root) {
  std::vector<fs::path> out;
  if (!fs::exists(root)) return out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

std::vector<CriterionResult> run_acceptance_pass(const fs::path& out, int workers, std::uint64_t seed) {
  fs::create_directories(out);
  std::vector<CriterionResult> r;
  r.push_back(run_criterion(1, "exact-counting", out, [&](Outcome& o) { criterion1(o, out, workers); }));
  r.push_back(run_criterion(2, "manhattan-self-test", out, [&](Outcome& o) { criterion2(o, out, workers); }));
  PairCurves pair;
  bool have_pair = false;
  r.push_back(run_criterion(3, "curve-anchors-and-shape", out, [&](Outcome& o) {
    pair = pair_curves(out, workers);
    have_pair = true;
    criterion3(o, pair, out);
  }));
  r.push_back(run_criterion(4, "beta-symmetry-and-bounds", out, [&](Outcome& o) {
    if (!have_pair) pair = pair_curves(out, workers);
    criterion4(o, pair, out, workers);
  }));
  r.push_back(run_criterion(5, "equal-length-correlation", out, [&](Outcome& o) { criterion5(o, out, workers); }));
  r.push_back(run_criterion(6, "growth-transfer", out, [&](Outcome& o) { criterion6(o, out, workers); }));
  r.push_back(run_criterion(7, "co-amenable-and-homology", out, [&](Outcome& o) { criterion7(o, out, workers); }));
  r.push_back(run_criterion(8, "quasi-convex-gap", out, [&](Outcome& o) { criterion8(o, out, workers); }));
  r.push_back(run_criterion(9, "conjugate-count", out, [&](Outcome& o) { criterion9(o, out); }));
  r.push_back(run_criterion(10, "spectral-sandwich-bochi", out,
                            [&](Outcome& o) { criterion10(o, out, workers, seed); }));
  r.push_back(run_criterion(11, "tree-joint-translation", out, [&](Outcome& o) { criterion11(o, out, seed); }));
  r.push_back(run_criterion(12, "schottky-dilation", out, [&](Outcome& o) { criterion12(o, out, workers); }));
  r.push_back(run_criterion(13, "formula-evaluators", out, [&](Outcome& o) { criterion13(o, out); }));

  Json summary = Json::array();
  for (const auto& c : r) summary.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  write_file(out / "acceptance.json", dump(summary));
  return r;
}

CriterionResult compare_outputs(const fs::path& a, const fs::path& b) {
  CriterionResult r{14, "determinism", true, ""};
  const auto fa = regular_files(a);
  const auto fb = regular_files(b);
  if (fa != fb) {
    r.pass = false;
    r.detail = "file sets differ (" + std::to_string(fa.size()) + " vs " + std::to_string(fb.size()) + ")";
    return r;
  }
  std::vector<std::string> differing;
  for (const auto& f : fa) {
    if (slurp(a / f) != slurp(b / f)) differing.push_back(f.string());
  }
  if (fa.empty()) {
    r.pass = false;
    r.detail = "no files to compare";
  } else if (differing.empty()) {
    r.detail = std::to_string(fa.size()) + " files byte-identical";
  } else {
    r.pass = false;
    r.detail = std::to_string(differing.size()) + " files differ, first " + differing.front();
  }
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  const fs::path first = options.output_dir / ("workers-" + std::to_string(options.workers));
  auto results = run_acceptance_pass(first, options.workers, options.seed);
  if (options.check_determinism) {
    const fs::path second = options.output_dir / ("workers-" + std::to_string(options.determinism_workers));
    if (second == first) {
      results.push_back({14, "determinism", false, "determinism check needs two distinct worker counts"});
    } else {
      run_acceptance_pass(second, options.determinism_workers, options.seed);
      results.push_back(compare_outputs(first, second));
    }
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  return std::string(r.pass ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + ": " + r.detail;
}

}  // namespace mls
