#include "mls/segmentation.hpp"

#include <algorithm>

#include "mls/error.hpp"

namespace mls {

Segmenter::Segmenter(int rank, std::span<const ReducedWord> pieces) : alphabet_size_(2 * rank) {
  nodes_.push_back(Node{std::vector<int>(static_cast<std::size_t>(alphabet_size_), -1), false});
  for (const auto& p : pieces) {
    if (p.empty()) continue;
    max_piece_ = std::max(max_piece_, static_cast<int>(p.length()));
    int node = 0;
    for (std::size_t i = p.length(); i-- > 0;) {
      const Letter l = p[i];
      if (l >= alphabet_size_) throw Error(ErrorKind::InvalidArgument, "piece letter outside rank");
      int next = walk(node, l);
      if (next < 0) {
        next = static_cast<int>(nodes_.size());
        nodes_.push_back(Node{std::vector<int>(static_cast<std::size_t>(alphabet_size_), -1), false});
        nodes_[static_cast<std::size_t>(node)].child[l] = next;
      }
      node = next;
    }
    nodes_[static_cast<std::size_t>(node)].terminal = true;
  }
}

bool Segmenter::contains(std::span<const Letter> w) const noexcept {
  if (w.empty()) return false;
  int node = 0;
  for (std::size_t i = w.size(); i-- > 0;) {
    if (w[i] >= alphabet_size_) return false;
    node = walk(node, w[i]);
    if (node < 0) return false;
  }
  return nodes_[static_cast<std::size_t>(node)].terminal;
}

int Segmenter::extend(std::span<const Letter> prefix, std::span<const int> costs) const noexcept {
  const std::size_t n = prefix.size();
  int best = kUnreachable;
  int node = 0;
  for (std::size_t len = 1; len <= n && len <= static_cast<std::size_t>(max_piece_); ++len) {
    const Letter l = prefix[n - len];
    if (l >= alphabet_size_) break;
    node = walk(node, l);
    if (node < 0) break;
    if (nodes_[static_cast<std::size_t>(node)].terminal) {
      best = std::min(best, costs[n - len] + 1);
    }
  }
  return best;
}

int Segmenter::length(std::span<const Letter> w) const {
  std::vector<int> costs(w.size() + 1, 0);
  for (std::size_t i = 1; i <= w.size(); ++i) {
    costs[i] = extend(w.first(i), std::span<const int>(costs).first(i));
  }
  return costs[w.size()];
}

double Segmenter::cyclic_length(std::span<const Letter> c) const {
  const std::size_t p = c.size();
  if (p == 0) return 0.0;
  // A simple cycle in the residue graph has at most p edges, each advancing at
  // most max_piece_ positions, so it wraps at most max_piece_ times.
  const std::size_t max_wrap = static_cast<std::size_t>(std::max(1, max_piece_));
  std::vector<Letter> periodic;
  std::vector<int> costs;
  double best = static_cast<double>(kUnreachable);
  for (std::size_t r = 0; r < p; ++r) {
    const std::size_t total = max_wrap * p;
    periodic.resize(total);
    for (std::size_t i = 0; i < total; ++i) periodic[i] = c[(r + i) % p];
    costs.assign(total + 1, 0);
    for (std::size_t i = 1; i <= total; ++i) {
      costs[i] = extend(std::span<const Letter>(periodic).first(i), std::span<const int>(costs).first(i));
      if (i % p == 0 && costs[i] < kUnreachable) {
        best = std::min(best, static_cast<double>(costs[i]) / static_cast<double>(i / p));
      }
    }
  }
  return best;
}

}  // namespace mls
