#include "mls/stallings.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "mls/error.hpp"

namespace mls {

namespace {

struct UnionFind {
  std::vector<int> parent;
  int add() {
    parent.push_back(static_cast<int>(parent.size()));
    return parent.back();
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
};

}  // namespace

SubgroupGraph stallings_build(int rank, std::span<const ReducedWord> gens) {
  const Alphabet alphabet(rank);
  UnionFind uf;
  const int base = uf.add();
  // Edges stored in one direction only; (p, l, q) implies (q, l^-1, p).
  std::vector<std::tuple<int, Letter, int>> edges;
  for (const auto& g : gens) {
    for (Letter l : g.letters()) {
      if (!alphabet.contains(l)) throw Error(ErrorKind::InvalidArgument, "generator letter outside rank");
    }
    if (g.empty()) continue;
    int cur = base;
    for (std::size_t i = 0; i < g.length(); ++i) {
      const int next = (i + 1 == g.length()) ? base : uf.add();
      edges.emplace_back(cur, g[i], next);
      cur = next;
    }
  }

  // Fold until no state has two equally labelled outgoing edges.
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<int, Letter>, int> out;
    for (const auto& [p, l, q] : edges) {
      const std::pair<int, Letter> keys[2] = {{uf.find(p), l}, {uf.find(q), inverse(l)}};
      const int targets[2] = {uf.find(q), uf.find(p)};
      for (int s = 0; s < 2; ++s) {
        auto [it, inserted] = out.emplace(keys[s], targets[s]);
        if (!inserted) {
          const int a = uf.find(it->second);
          const int b = uf.find(targets[s]);
          if (a != b) {
            // Keep the base state as its own representative.
            if (b == uf.find(base)) {
              uf.parent[static_cast<std::size_t>(a)] = b;
            } else {
              uf.parent[static_cast<std::size_t>(b)] = a;
            }
            changed = true;
          }
        }
      }
      if (changed) break;
    }
  }

  // Renumber surviving states with the base first, in order of discovery.
  std::map<int, int> index;
  index[uf.find(base)] = 0;
  for (const auto& [p, l, q] : edges) {
    for (int s : {uf.find(p), uf.find(q)}) {
      if (!index.contains(s)) {
        const int next = static_cast<int>(index.size());
        index[s] = next;
      }
    }
  }

  SubgroupGraph g;
  g.rank_ = rank;
  g.generators_.assign(gens.begin(), gens.end());
  const std::size_t k = static_cast<std::size_t>(2 * rank);
  g.delta_.assign(index.size() * k, SubgroupGraph::kNone);
  for (const auto& [p, l, q] : edges) {
    const int a = index[uf.find(p)];
    const int b = index[uf.find(q)];
    g.delta_[static_cast<std::size_t>(a) * k + l] = b;
    g.delta_[static_cast<std::size_t>(b) * k + inverse(l)] = a;
  }
  return g;
}

bool SubgroupGraph::accepts(const ReducedWord& w) const noexcept {
  int s = kBase;
  for (Letter l : w.letters()) {
    if (static_cast<std::size_t>(l) >= alphabet_size()) return false;
    s = step(s, l);
    if (s == kNone) return false;
  }
  return s == kBase;
}

SubgroupGraph::CosetKey SubgroupGraph::right_coset(const ReducedWord& w) const {
  int s = kBase;
  std::size_t i = 0;
  for (; i < w.length(); ++i) {
    const int t = step(s, w[i]);
    if (t == kNone) break;
    s = t;
  }
  std::vector<Letter> rest(w.letters().begin() + static_cast<long>(i), w.letters().end());
  return {s, ReducedWord::from_reduced(std::move(rest))};
}

bool SubgroupGraph::is_folded() const noexcept {
  // The transition table is deterministic by construction; check consistency of
  // inverse edges and that generators loop at the base.
  for (int s = 0; s < num_states(); ++s) {
    for (std::size_t l = 0; l < alphabet_size(); ++l) {
      const int t = step(s, static_cast<Letter>(l));
      if (t != kNone && step(t, inverse(static_cast<Letter>(l))) != s) return false;
    }
  }
  return std::all_of(generators_.begin(), generators_.end(), [&](const ReducedWord& g) { return accepts(g); });
}

}  // namespace mls
