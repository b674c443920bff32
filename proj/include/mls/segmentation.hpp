#pragma once

// Minimum segmentation of reduced words into a fixed dictionary of pieces.
//
// In a free group the Cayley graph of the basis is a tree. Along any path
// s_1 ... s_n from o to x, the last crossing of each edge of the geodesic
// [o, x] happens inside some s_i, and the edges assigned to one s_i spell a
// subword of s_i. So when the generating set is factor-closed (every subword
// of a generator is a generator), |x|_S is exactly the minimum number of
// dictionary pieces needed to spell the reduced word x.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "mls/words.hpp"

namespace mls {

class Segmenter {
 public:
  static constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

  Segmenter() = default;
  Segmenter(int rank, std::span<const ReducedWord> pieces);

  int max_piece() const noexcept { return max_piece_; }
  bool contains(std::span<const Letter> w) const noexcept;

  /// Minimum number of pieces spelling w (kUnreachable if impossible).
  int length(std::span<const Letter> w) const;

  /// Incremental form: costs[i] is the cost of the prefix of length i, for
  /// i < prefix.size(); returns the cost of the whole prefix.
  int extend(std::span<const Letter> prefix, std::span<const int> costs) const noexcept;

  /// Stable translation length lim cost(c^n)/n of a cyclically reduced word,
  /// computed as the minimum ratio cycle over cyclic segmentations.
  double cyclic_length(std::span<const Letter> cyclically_reduced) const;

 private:
  struct Node {
    std::vector<int> child;  // indexed by letter, -1 when absent
    bool terminal = false;
  };
  int walk(int node, Letter l) const noexcept {
    return nodes_[static_cast<std::size_t>(node)].child[l];
  }

  int alphabet_size_ = 0;
  int max_piece_ = 0;
  std::vector<Node> nodes_;  // trie of reversed pieces, root at 0
};

}  // namespace mls
