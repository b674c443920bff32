#include "mls/enumerate.hpp"

#include <cmath>

#include "mls/error.hpp"

namespace mls {

namespace {

constexpr double kSlack = 1e-9;
constexpr std::size_t kMaxDepth = 4096;

struct Component {
  double weight;
  const Segmenter* seg;  // null for the basis length
};

bool collect_components(const MetricHandle& m, double weight, std::vector<Component>& out,
                        std::vector<MetricHandle>& keep) {
  switch (m.kind()) {
    case MetricKind::Word: {
      if (m.generating_set()->is_standard_basis()) {
        out.push_back({weight, nullptr});
        return true;
      }
      if (const Segmenter* seg = m.segmenter()) {
        keep.push_back(m);
        out.push_back({weight, seg});
        return true;
      }
      return false;
    }
    case MetricKind::Combination: {
      auto [d1, d2] = m.components();
      auto [s, t] = m.coefficients();
      return collect_components(*d1, weight * s, out, keep) && collect_components(*d2, weight * t, out, keep);
    }
    default:
      return false;
  }
}

std::size_t prefix_chunk(int alphabet_size, Letter l1, Letter l2) {
  const std::size_t n = static_cast<std::size_t>(alphabet_size);
  const Letter inv = inverse(l1);
  return 1 + l1 * (n - 1) + (l2 < inv ? l2 : l2 - 1u);
}

}  // namespace

struct BallPlan::Impl {
  int rank = 2;
  double T = 0;
  std::vector<Component> components;
  std::vector<MetricHandle> keep;
  std::vector<Automorphism> pullbacks;  // outermost first

  bool bfs = false;
  std::vector<std::vector<std::pair<ReducedWord, int>>> bfs_chunks;

  double cost_of(const std::vector<std::vector<int>>& costs, std::size_t len) const {
    double total = 0;
    for (std::size_t c = 0; c < components.size(); ++c) {
      const double v = components[c].seg ? costs[c][len] : static_cast<double>(len);
      total += components[c].weight * v;
    }
    return total;
  }

  void emit(std::span<const Letter> y, double d, const BallVisitor& visit) const {
    if (pullbacks.empty()) {
      visit(y, d);
      return;
    }
    ReducedWord x = ReducedWord::from_reduced({y.begin(), y.end()});
    for (auto it = pullbacks.rbegin(); it != pullbacks.rend(); ++it) x = it->apply_inverse(x);
    visit(x.letters(), d);
  }

  // Appends l to w and returns the cost of the new prefix.
  double push(std::vector<Letter>& w, std::vector<std::vector<int>>& costs, Letter l) const {
    w.push_back(l);
    for (std::size_t c = 0; c < components.size(); ++c) {
      if (!components[c].seg) continue;
      auto& cc = costs[c];
      cc.resize(w.size() + 1);
      cc[w.size()] = components[c].seg->extend(w, std::span<const int>(cc).first(w.size()));
    }
    return cost_of(costs, w.size());
  }

  void dfs(std::vector<Letter>& w, std::vector<std::vector<int>>& costs, const BallVisitor& visit) const {
    if (w.size() >= kMaxDepth) throw Error(ErrorKind::BudgetExceeded, "ball enumeration depth cap reached");
    const Letter forbidden = inverse(w.back());
    for (int li = 0; li < 2 * rank; ++li) {
      const Letter l = static_cast<Letter>(li);
      if (l == forbidden) continue;
      const double d = push(w, costs, l);
      if (d <= T + kSlack) {
        emit(w, d, visit);
        dfs(w, costs, visit);
      }
      w.pop_back();
    }
  }
};

bool is_enumerable(const MetricHandle& m) noexcept {
  const MetricHandle* cur = &m;
  while (cur->kind() == MetricKind::PulledBack) cur = cur->inner();
  if (cur->kind() == MetricKind::Word) return true;
  std::vector<Component> comps;
  std::vector<MetricHandle> keep;
  return collect_components(*cur, 1.0, comps, keep);
}

BallPlan::BallPlan(const MetricHandle& m, double T) : T_(T), rank_(m.rank()) {
  auto impl = std::make_shared<Impl>();
  impl->rank = m.rank();
  impl->T = T;
  const MetricHandle* cur = &m;
  while (cur->kind() == MetricKind::PulledBack) {
    impl->pullbacks.push_back(*cur->automorphism());
    cur = cur->inner();
  }
  if (!collect_components(*cur, 1.0, impl->components, impl->keep)) {
    if (cur->kind() != MetricKind::Word) {
      throw Error(ErrorKind::PreconditionViolated,
                  std::string("no ball enumeration for metric kind ") + to_string(cur->kind()));
    }
    impl->components.clear();
    impl->bfs = true;
    const int n = 2 * impl->rank;
    impl->bfs_chunks.resize(1 + static_cast<std::size_t>(n * (n - 1)));
    const int radius = static_cast<int>(std::floor(T + kSlack));
    if (radius >= 0) {
      for (auto& [w, d] : cur->bfs_ball(radius)) {
        const std::size_t chunk = w.length() <= 1 ? 0 : prefix_chunk(n, w[0], w[1]);
        impl->bfs_chunks[chunk].emplace_back(std::move(w), d);
      }
    }
  }
  impl_ = std::move(impl);
}

std::size_t BallPlan::num_chunks() const noexcept {
  const std::size_t n = static_cast<std::size_t>(2 * rank_);
  return 1 + n * (n - 1);
}

void BallPlan::walk(std::size_t chunk, const BallVisitor& visit) const {
  const Impl& p = *impl_;
  if (p.bfs) {
    for (const auto& [w, d] : p.bfs_chunks[chunk]) p.emit(w.letters(), static_cast<double>(d), visit);
    return;
  }
  if (T_ < -kSlack) return;
  std::vector<Letter> w;
  w.reserve(64);
  std::vector<std::vector<int>> costs(p.components.size(), std::vector<int>{0});
  const int n = 2 * rank_;
  if (chunk == 0) {
    p.emit(w, 0.0, visit);
    for (int li = 0; li < n; ++li) {
      const double d = p.push(w, costs, static_cast<Letter>(li));
      if (d <= T_ + kSlack) p.emit(w, d, visit);
      w.pop_back();
    }
    return;
  }
  const std::size_t idx = chunk - 1;
  const Letter l1 = static_cast<Letter>(idx / static_cast<std::size_t>(n - 1));
  std::size_t r = idx % static_cast<std::size_t>(n - 1);
  const Letter l2 = static_cast<Letter>(r >= inverse(l1) ? r + 1 : r);
  if (p.push(w, costs, l1) > T_ + kSlack) return;
  const double d = p.push(w, costs, l2);
  if (d > T_ + kSlack) return;
  p.emit(w, d, visit);
  p.dfs(w, costs, visit);
}

GeneratingSet threshold_generating_set(const MetricHandle& m, double n) {
  if (!(n > m.alpha_rg() + 1)) {
    throw Error(ErrorKind::ThresholdTooSmall, "threshold must exceed alpha + 1");
  }
  constexpr std::size_t kBudget = 200'000;
  const BallPlan plan(m, n);
  auto chunks = visit_ball<std::vector<ReducedWord>>(plan, 1, [&](std::vector<ReducedWord>& acc, std::span<const Letter> x, double) {
    if (x.empty()) return;
    acc.push_back(ReducedWord::from_reduced({x.begin(), x.end()}));
    if (acc.size() > kBudget) throw Error(ErrorKind::BudgetExceeded, "threshold set exceeds 200000 elements");
  });
  std::vector<ReducedWord> words;
  for (auto& chunk : chunks) {
    for (auto& w : chunk) words.push_back(std::move(w));
  }
  if (words.size() > kBudget) throw Error(ErrorKind::BudgetExceeded, "threshold set exceeds 200000 elements");
  return GeneratingSet::from_words(m.rank(), std::move(words));
}

}  // namespace mls
