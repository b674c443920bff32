#include "mls/census.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <functional>
#include <set>
#include <unordered_set>

#include "mls/enumerate.hpp"
#include "mls/error.hpp"

namespace mls {

namespace {

constexpr double kSlack = 1e-9;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_rows(std::size_t n, const EnumOptions& options) {
  if (n > options.max_rows) {
    throw Error(ErrorKind::BudgetExceeded, "census exceeds " + std::to_string(options.max_rows) + " rows");
  }
}

std::size_t radius_index(double d) { return static_cast<std::size_t>(std::max(0.0, std::ceil(d - kSlack))); }

bool reads_loop_somewhere(const SubgroupGraph& H, std::span<const Letter> c) {
  for (int q = 0; q < H.num_states(); ++q) {
    int s = q;
    for (Letter l : c) {
      s = H.step(s, l);
      if (s == SubgroupGraph::kNone) break;
    }
    if (s == q) return true;
  }
  return false;
}

// Basis necklaces: cyclically reduced words equal to their least rotation,
// with every letter >= the first (a smaller letter would start a smaller
// rotation). Chunks follow the ball layout.
std::vector<ReducedWord> necklaces_chunk(int rank, int max_len, std::size_t chunk) {
  std::vector<ReducedWord> out;
  const int n = 2 * rank;
  std::vector<Letter> w;
  auto emit_if_canonical = [&] {
    if (w.size() > 1 && w.back() == inverse(w.front())) return;
    if (least_rotation(w) != 0) return;
    out.push_back(ReducedWord::from_reduced(w));
  };
  std::function<void()> dfs = [&] {
    if (static_cast<int>(w.size()) >= max_len) return;
    const Letter forbidden = inverse(w.back());
    for (int li = w.front(); li < n; ++li) {
      const Letter l = static_cast<Letter>(li);
      if (l == forbidden) continue;
      w.push_back(l);
      emit_if_canonical();
      dfs();
      w.pop_back();
    }
  };
  if (max_len < 1) return out;
  if (chunk == 0) {
    for (int li = 0; li < n; ++li) out.push_back(ReducedWord::from_reduced({static_cast<Letter>(li)}));
    return out;
  }
  if (max_len < 2) return out;
  const std::size_t idx = chunk - 1;
  const Letter l1 = static_cast<Letter>(idx / static_cast<std::size_t>(n - 1));
  const std::size_t r = idx % static_cast<std::size_t>(n - 1);
  const Letter l2 = static_cast<Letter>(r >= inverse(l1) ? r + 1 : r);
  if (l2 < l1) return out;
  w = {l1, l2};
  emit_if_canonical();
  dfs();
  return out;
}

// Peels pulled-back layers off m; returns the innermost metric.
const MetricHandle* strip_pullbacks(const MetricHandle& m, std::vector<const Automorphism*>& phis) {
  const MetricHandle* cur = &m;
  while (cur->kind() == MetricKind::PulledBack) {
    phis.push_back(cur->automorphism());
    cur = cur->inner();
  }
  return cur;
}

bool is_basis_metric(const MetricHandle& m) {
  return m.kind() == MetricKind::Word && m.generating_set()->is_standard_basis();
}

ConjCensus conj_census(const MetricHandle& d, const MetricHandle* d_star, double T, const EnumOptions& options) {
  ConjCensus census;
  census.radius = T;
  census.joint = d_star != nullptr;
  std::vector<const Automorphism*> phis;
  const MetricHandle* base = strip_pullbacks(d, phis);

  std::vector<ReducedWord> classes;
  if (is_basis_metric(*base)) {
    // Classes of d are phi^-1 images of basis necklaces, with exact lengths.
    census.exact = true;
    const int max_len = static_cast<int>(std::floor(T + kSlack));
    const BallPlan layout(*base, 0);
    auto chunks = parallel_chunks<std::vector<ReducedWord>>(
        layout.num_chunks(), options.workers,
        [&](std::size_t chunk) { return necklaces_chunk(d.rank(), max_len, chunk); });
    std::set<CyclicWord> seen;
    for (auto& chunk : chunks) {
      for (auto& c : chunk) {
        ReducedWord x = std::move(c);
        for (auto it = phis.rbegin(); it != phis.rend(); ++it) x = (*it)->apply_inverse(x);
        seen.insert(conjugacy_class(x));
      }
      check_rows(seen.size(), options);
    }
    for (const auto& c : seen) classes.push_back(c.word());
  } else {
    // Classes discovered from the element ball.
    const BallPlan plan(d, T);
    auto chunks = visit_ball<std::set<CyclicWord>>(plan, options.workers,
                                                   [](std::set<CyclicWord>& acc, std::span<const Letter> x, double) {
                                                     if (x.empty()) return;
                                                     acc.insert(conjugacy_class(ReducedWord::from_reduced({x.begin(), x.end()})));
                                                   });
    std::set<CyclicWord> seen;
    for (auto& chunk : chunks) {
      seen.merge(chunk);
      check_rows(seen.size(), options);
    }
    for (const auto& c : seen) classes.push_back(c.word());
  }

  // Lengths are evaluated in fixed-size slices so the result does not depend on
  // the worker count.
  constexpr std::size_t kSlice = 4096;
  const std::size_t n_slices = (classes.size() + kSlice - 1) / kSlice;
  auto slices = parallel_chunks<std::vector<ConjRow>>(n_slices, options.workers, [&](std::size_t s) {
    std::vector<ConjRow> rows;
    const std::size_t end = std::min(classes.size(), (s + 1) * kSlice);
    for (std::size_t i = s * kSlice; i < end; ++i) {
      const ReducedWord& w = classes[i];
      ConjRow row;
      row.cls = make_cyclic(w);
      row.ell = translation_length(d, w, options.bracket_depth);
      if (row.ell.lower > T + kSlack) continue;
      row.straddles = row.ell.upper > T + kSlack;
      if (d_star) row.ell_star = translation_length(*d_star, w, options.bracket_depth);
      rows.push_back(std::move(row));
    }
    return rows;
  });
  for (auto& s : slices) {
    for (auto& r : s) census.rows.push_back(std::move(r));
  }
  std::sort(census.rows.begin(), census.rows.end(), [](const ConjRow& a, const ConjRow& b) { return a.cls < b.cls; });
  return census;
}

}  // namespace

// ---------------------------------------------------------------------------
// Filter

Filter Filter::all() { return Filter{}; }

Filter Filter::homology_class(std::vector<int> cls) {
  Filter f;
  f.kind_ = Kind::HomologyClass;
  f.homology_ = std::move(cls);
  return f;
}

Filter Filter::subgroup(SubgroupGraph H) {
  Filter f;
  f.kind_ = Kind::Subgroup;
  f.subgroup_ = std::move(H);
  return f;
}

Filter Filter::commutator_subgroup() {
  Filter f;
  f.kind_ = Kind::CommutatorSubgroup;
  return f;
}

Filter Filter::tolerance(double c, double p) {
  if (!(p < 1)) throw Error(ErrorKind::InvalidArgument, "tolerance exponent p must be < 1");
  if (!(c >= 0)) throw Error(ErrorKind::InvalidArgument, "tolerance coefficient c must be >= 0");
  Filter f;
  f.kind_ = Kind::Tolerance;
  f.c_ = c;
  f.p_ = p;
  return f;
}

Filter Filter::equality(double v_d, double v_d_star, double rel_tol) {
  if (!(v_d > 0) || !(v_d_star > 0)) throw Error(ErrorKind::InvalidArgument, "growth rates must be positive");
  Filter f;
  f.kind_ = Kind::Equality;
  f.v_ = v_d;
  f.v_star_ = v_d_star;
  f.rel_tol_ = rel_tol;
  return f;
}

std::string Filter::describe() const {
  switch (kind_) {
    case Kind::All: return "all";
    case Kind::HomologyClass: {
      std::string s = "homology(";
      for (std::size_t i = 0; i < homology_.size(); ++i) s += (i ? "," : "") + std::to_string(homology_[i]);
      return s + ")";
    }
    case Kind::Subgroup: {
      std::string s = "subgroup<";
      bool first = true;
      for (const auto& g : subgroup_->generators()) {
        s += (first ? "" : ",") + to_string(g);
        first = false;
      }
      return s + ">";
    }
    case Kind::CommutatorSubgroup: return "commutator";
    case Kind::Tolerance: return "tolerance(c=" + format_double(c_) + ",p=" + format_double(p_) + ")";
    case Kind::Equality: return "equality(v=" + format_double(v_) + ",v*=" + format_double(v_star_) + ")";
  }
  return "?";
}

bool Filter::accepts_element(std::span<const Letter> x, double d, double d_star) const {
  switch (kind_) {
    case Kind::All: return true;
    case Kind::HomologyClass: {
      const ReducedWord w = ReducedWord::from_reduced({x.begin(), x.end()});
      return abelianize(w, static_cast<int>(homology_.size())) == homology_;
    }
    case Kind::CommutatorSubgroup: {
      std::vector<int> counts(16, 0);
      for (Letter l : x) counts[static_cast<std::size_t>(generator_index(l))] += is_inverse_letter(l) ? -1 : 1;
      return std::all_of(counts.begin(), counts.end(), [](int c) { return c == 0; });
    }
    case Kind::Subgroup: {
      int s = SubgroupGraph::kBase;
      for (Letter l : x) {
        s = subgroup_->step(s, l);
        if (s == SubgroupGraph::kNone) return false;
      }
      return s == SubgroupGraph::kBase;
    }
    case Kind::Tolerance:
    case Kind::Equality: {
      if (std::isnan(d_star)) throw Error(ErrorKind::InvalidArgument, "filter needs a joint census");
      if (kind_ == Kind::Tolerance) return std::abs(d - d_star) <= c_ * std::pow(d, p_) + kSlack;
      return std::abs(v_ * d - v_star_ * d_star) <= rel_tol_ * std::max(1.0, v_ * d);
    }
  }
  return false;
}

bool Filter::accepts_class(const ConjRow& row) const {
  const ReducedWord& w = row.cls.word();
  switch (kind_) {
    case Kind::All: return true;
    case Kind::HomologyClass:
    case Kind::CommutatorSubgroup:
      return accepts_element(w.letters(), 0, 0);
    case Kind::Subgroup:
      return reads_loop_somewhere(*subgroup_, w.letters());
    case Kind::Tolerance: {
      if (!row.ell_star) throw Error(ErrorKind::InvalidArgument, "filter needs a joint census");
      const LengthBracket& a = row.ell;
      const LengthBracket& b = *row.ell_star;
      const double gap = std::max({0.0, a.lower - b.upper, b.lower - a.upper});
      return gap <= c_ * std::pow(a.upper, p_) + kSlack;
    }
    case Kind::Equality: {
      if (!row.ell_star) throw Error(ErrorKind::InvalidArgument, "filter needs a joint census");
      if (!row.ell.exact() || !row.ell_star->exact()) {
        throw Error(ErrorKind::RequiresExactLengths, "equality filter on bracketed lengths for " + to_string(w));
      }
      return accepts_element(w.letters(), row.ell.lower, row.ell_star->lower);
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Enumeration

ElementCensus enumerate_elements(const MetricHandle& m, double T, const EnumOptions& options) {
  const BallPlan plan(m, T);
  auto chunks = visit_ball<std::vector<ElementRow>>(
      plan, options.workers, [&](std::vector<ElementRow>& acc, std::span<const Letter> x, double d) {
        acc.push_back({PackedWord::pack(x), d, kNaN});
        check_rows(acc.size(), options);
      });
  ElementCensus c;
  c.radius = T;
  for (auto& chunk : chunks) {
    c.rows.insert(c.rows.end(), chunk.begin(), chunk.end());
    check_rows(c.rows.size(), options);
  }
  return c;
}

ElementCensus enumerate_joint_elements(const MetricHandle& d, const MetricHandle& d_star, double T,
                                       const EnumOptions& options) {
  if (d.rank() != d_star.rank()) throw Error(ErrorKind::InvalidArgument, "metric ranks differ");
  const BallPlan plan(d, T);
  auto chunks = visit_ball<std::vector<ElementRow>>(
      plan, options.workers, [&](std::vector<ElementRow>& acc, std::span<const Letter> x, double dx) {
        acc.push_back({PackedWord::pack(x), dx, d_star.distance(x)});
        check_rows(acc.size(), options);
      });
  ElementCensus c;
  c.radius = T;
  c.joint = true;
  for (auto& chunk : chunks) {
    c.rows.insert(c.rows.end(), chunk.begin(), chunk.end());
    check_rows(c.rows.size(), options);
  }
  return c;
}

ConjCensus enumerate_conjugacy(const MetricHandle& m, double T, const EnumOptions& options) {
  return conj_census(m, nullptr, T, options);
}

ConjCensus enumerate_joint_conjugacy(const MetricHandle& d, const MetricHandle& d_star, double T,
                                     const EnumOptions& options) {
  if (d.rank() != d_star.rank()) throw Error(ErrorKind::InvalidArgument, "metric ranks differ");
  return conj_census(d, &d_star, T, options);
}

namespace {

CountingSequence cumulative(const std::vector<std::uint64_t>& sphere, double T) {
  const std::size_t top = static_cast<std::size_t>(std::floor(T + kSlack));
  CountingSequence out;
  std::uint64_t total = 0;
  for (std::size_t t = 0; t <= top; ++t) {
    if (t < sphere.size()) total += sphere[t];
    out.push_back({static_cast<double>(t), total});
  }
  return out;
}

void add_at(std::vector<std::uint64_t>& sphere, std::size_t i, std::uint64_t n = 1) {
  if (sphere.size() <= i) sphere.resize(i + 1, 0);
  sphere[i] += n;
}

}  // namespace

CountingSequence count_ball(const MetricHandle& m, double T, const Filter& filter, const EnumOptions& options) {
  const BallPlan plan(m, T);
  auto chunks = visit_ball<std::vector<std::uint64_t>>(
      plan, options.workers, [&](std::vector<std::uint64_t>& acc, std::span<const Letter> x, double d) {
        if (filter.accepts_element(x, d, kNaN)) add_at(acc, radius_index(d));
      });
  std::vector<std::uint64_t> sphere;
  for (const auto& chunk : chunks) {
    for (std::size_t i = 0; i < chunk.size(); ++i) add_at(sphere, i, chunk[i]);
  }
  return cumulative(sphere, T);
}

CountingSequence ball_counts(const ElementCensus& c, const Filter& filter) {
  std::vector<std::uint64_t> sphere;
  const bool needs_word = filter.kind() != Filter::Kind::All && filter.kind() != Filter::Kind::Tolerance &&
                          filter.kind() != Filter::Kind::Equality;
  for (const auto& row : c.rows) {
    bool ok = true;
    if (needs_word) {
      const ReducedWord w = row.word.unpack();
      ok = filter.accepts_element(w.letters(), row.d, row.d_star);
    } else {
      ok = filter.accepts_element({}, row.d, row.d_star);
    }
    if (ok) add_at(sphere, radius_index(row.d));
  }
  return cumulative(sphere, c.radius);
}

CountingSequence class_counts(const ConjCensus& c, const Filter& filter) {
  std::vector<std::uint64_t> sphere;
  for (const auto& row : c.rows) {
    if (filter.accepts_class(row)) add_at(sphere, radius_index(row.ell.lower));
  }
  return cumulative(sphere, c.radius);
}

std::vector<std::uint64_t> sphere_sizes(const CountingSequence& ball) {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < ball.size(); ++i) out.push_back(ball[i].N - (i ? ball[i - 1].N : 0));
  return out;
}

// ---------------------------------------------------------------------------
// Growth

GrowthEstimate growth_rate(std::span<const CountPoint> counts, std::size_t window) {
  std::vector<CountPoint> pts;
  for (const auto& p : counts) {
    if (p.N > 0) pts.push_back(p);
  }
  if (pts.size() < 3) throw Error(ErrorKind::InvalidArgument, "growth estimate needs >= 3 points with N > 0");
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i].T > pts[i - 1].T)) throw Error(ErrorKind::InvalidArgument, "radii must increase strictly");
  }
  GrowthEstimate g;
  if (std::all_of(pts.begin(), pts.end(), [&](const CountPoint& p) { return p.N == pts.front().N; })) {
    g.degenerate = true;
    g.window_min = pts.front().T;
    g.window_max = pts.back().T;
    return g;
  }
  const std::size_t k = std::min(pts.size(), std::max<std::size_t>(window, 2) + 1);
  const std::span<const CountPoint> win(pts.data() + (pts.size() - k), k);
  g.window_min = win.front().T;
  g.window_max = win.back().T;

  // Annulus sizes A_i = N(T_i) - N(T_{i-1}) at the top window+1 radii; ratios
  // of consecutive nonempty annuli, so parity gaps are bridged. Ball ratios
  // stand in when fewer than two annuli are nonempty.
  double sum = 0;
  std::size_t used = 0;
  double prev_T = 0;
  double prev_A = 0;
  for (std::size_t i = std::max<std::size_t>(pts.size() - k, 1); i < pts.size(); ++i) {
    const double a = static_cast<double>(pts[i].N) - static_cast<double>(pts[i - 1].N);
    if (a <= 0) continue;
    if (prev_A > 0) {
      sum += std::log(a / prev_A) / (pts[i].T - prev_T);
      ++used;
    }
    prev_T = pts[i].T;
    prev_A = a;
  }
  if (used == 0) {
    for (std::size_t i = 1; i < k; ++i) {
      sum += std::log(static_cast<double>(win[i].N) / static_cast<double>(win[i - 1].N)) / (win[i].T - win[i - 1].T);
    }
    used = k - 1;
  }
  g.annulus = sum / static_cast<double>(used);

  Eigen::VectorXd y(static_cast<Eigen::Index>(k));
  Eigen::MatrixXd X(static_cast<Eigen::Index>(k), 2);
  for (std::size_t i = 0; i < k; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    y(r) = std::log(static_cast<double>(win[i].N));
    X(r, 0) = win[i].T;
    X(r, 1) = 1.0;
  }
  const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(y);
  g.linear_fit = beta(0);
  g.residual = (X * beta - y).cwiseAbs().maxCoeff();

  const bool positive_radii = std::all_of(win.begin(), win.end(), [](const CountPoint& p) { return p.T > 0; });
  if (k >= 4 && positive_radii) {
    Eigen::MatrixXd Z(static_cast<Eigen::Index>(k), 3);
    for (std::size_t i = 0; i < k; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      Z(r, 0) = win[i].T;
      Z(r, 1) = -std::log(win[i].T);
      Z(r, 2) = 1.0;
    }
    const Eigen::Vector3d gamma = Z.colPivHouseholderQr().solve(y);
    g.corrected_fit = gamma(0);
    g.prefactor = gamma(1);
  } else {
    g.corrected_fit = g.linear_fit;
  }
  g.rate = std::max(0.0, g.annulus);
  return g;
}

GrowthEstimate restricted_growth(const ElementCensus& c, const Filter& filter, std::size_t window) {
  const CountingSequence counts = ball_counts(c, filter);
  if (counts.empty() || counts.back().N == 0) throw Error(ErrorKind::EmptyFilter, "no rows pass " + filter.describe());
  return growth_rate(counts, window);
}

GrowthEstimate restricted_growth(const ConjCensus& c, const Filter& filter, std::size_t window) {
  const CountingSequence counts = class_counts(c, filter);
  if (counts.empty() || counts.back().N == 0) throw Error(ErrorKind::EmptyFilter, "no rows pass " + filter.describe());
  return growth_rate(counts, window);
}

CountingSequence correlation_census(const ConjCensus& c, const Filter& mode) {
  if (mode.kind() != Filter::Kind::Equality && mode.kind() != Filter::Kind::Tolerance) {
    throw Error(ErrorKind::InvalidArgument, "correlation mode must be equality or tolerance");
  }
  if (!c.joint) throw Error(ErrorKind::InvalidArgument, "correlation needs a joint census");
  return class_counts(c, mode);
}

// ---------------------------------------------------------------------------
// Conjugates in a ball

ConjugateCountCheck conjugate_count_bound_check(const MetricHandle& m, const ReducedWord& x, double T, double C,
                                                double v) {
  if (m.kind() != MetricKind::Word) {
    throw Error(ErrorKind::PreconditionViolated, "conjugate counting needs a word metric");
  }
  const double max_len = static_cast<double>(m.generating_set()->max_length());
  const double basis_cap = max_len * T;
  // A conjugate y = u^-1 x u has a conjugator with |u| <= |x| + |y|/2.
  const int R = static_cast<int>(x.length()) + static_cast<int>(std::floor(basis_cap / 2)) + 1;
  const MetricHandle basis = MetricHandle::word(GeneratingSet::standard_basis(m.rank()));
  const BallPlan plan(basis, R);
  auto chunks = visit_ball<std::vector<PackedWord>>(plan, 1, [&](std::vector<PackedWord>& acc, std::span<const Letter> u, double) {
    const ReducedWord uw = ReducedWord::from_reduced({u.begin(), u.end()});
    const ReducedWord y = multiply(multiply(uw.inverse(), x), uw);
    if (static_cast<double>(y.length()) > basis_cap + kSlack) return;
    if (m.distance(y) <= T + kSlack) acc.push_back(PackedWord::pack(y));
  });
  std::unordered_set<PackedWord, PackedWordHash> seen;
  for (const auto& chunk : chunks) seen.insert(chunk.begin(), chunk.end());

  ConjugateCountCheck r{};
  r.count = seen.size();
  r.ell = translation_length(m, x).upper;
  r.lhs = r.count ? std::log(static_cast<double>(r.count)) : -std::numeric_limits<double>::infinity();
  r.rhs = std::log(r.ell + C) + v * (T - r.ell) / 2 + C;
  r.holds = r.count == 0 || r.lhs <= r.rhs;
  return r;
}

// ---------------------------------------------------------------------------
// Histograms and intersection numbers

std::uint64_t JointHistogram::total() const noexcept {
  std::uint64_t n = 0;
  for (const auto& c : cells) n += c.count;
  return n;
}

namespace {

using CellMap = std::map<std::pair<double, double>, std::uint64_t>;

JointHistogram from_map(const CellMap& m, double radius) {
  JointHistogram h;
  h.radius = radius;
  h.cells.reserve(m.size());
  for (const auto& [key, n] : m) h.cells.push_back({key.first, key.second, n});
  return h;
}

}  // namespace

JointHistogram joint_histogram(const MetricHandle& d, const MetricHandle& d_star, double T, const EnumOptions& options) {
  if (d.rank() != d_star.rank()) throw Error(ErrorKind::InvalidArgument, "metric ranks differ");
  const BallPlan plan(d, T);
  auto chunks = visit_ball<CellMap>(plan, options.workers, [&](CellMap& acc, std::span<const Letter> x, double dx) {
    ++acc[{dx, d_star.distance(x)}];
    check_rows(acc.size(), options);
  });
  CellMap merged;
  for (const auto& chunk : chunks) {
    for (const auto& [key, n] : chunk) merged[key] += n;
  }
  return from_map(merged, T);
}

JointHistogram joint_histogram(const ElementCensus& c) {
  if (!c.joint) throw Error(ErrorKind::InvalidArgument, "histogram needs a joint census");
  CellMap m;
  for (const auto& row : c.rows) ++m[{row.d, row.d_star}];
  return from_map(m, c.radius);
}

IntersectionNumber intersection_number(const JointHistogram& h) {
  if (h.cells.empty()) throw Error(ErrorKind::EmptyCensus, "empty census");
  const double T = std::floor(h.radius + kSlack);
  if (T < 2) throw Error(ErrorKind::EmptyCensus, "intersection number needs radius >= 2");
  auto mean_ratio = [&](double R) {
    double sum = 0;
    std::uint64_t n = 0;
    for (const auto& c : h.cells) {
      if (c.d <= R + kSlack) {
        sum += static_cast<double>(c.count) * c.d_star;
        n += c.count;
      }
    }
    return sum / (static_cast<double>(n) * R);
  };
  return {mean_ratio(T), mean_ratio(T - 1), T};
}

IntersectionNumber intersection_number(const ElementCensus& c) {
  if (c.rows.empty()) throw Error(ErrorKind::EmptyCensus, "empty census");
  return intersection_number(joint_histogram(c));
}

// ---------------------------------------------------------------------------
// CSV

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_counts_csv(std::ostream& os, const CountingSequence& counts) {
  os << "T,N\n";
  for (const auto& p : counts) os << format_double(p.T) << ',' << p.N << '\n';
}

void write_census_csv(std::ostream& os, const ElementCensus& c) {
  os << "element,d,d_star\n";
  for (const auto& row : c.rows) {
    os << to_string(row.word.unpack()) << ',' << format_double(row.d) << ',' << format_double(row.d_star) << '\n';
  }
}

}  // namespace mls
