#pragma once

// Folded (Stallings) automata for finitely generated subgroups of F_k.

#include <cstdint>
#include <span>
#include <vector>

#include "mls/words.hpp"

namespace mls {

class SubgroupGraph {
 public:
  static constexpr int kNone = -1;
  static constexpr int kBase = 0;

  int rank() const noexcept { return rank_; }
  int num_states() const noexcept { return static_cast<int>(delta_.size() / alphabet_size()); }
  const std::vector<ReducedWord>& generators() const noexcept { return generators_; }

  /// Transition on one letter; kNone when the edge is absent.
  int step(int state, Letter l) const noexcept {
    return delta_[static_cast<std::size_t>(state) * alphabet_size() + l];
  }

  bool accepts(const ReducedWord& w) const noexcept;

  /// Identifies the right coset H*w: the state where the greedy read stops
  /// together with the unread suffix.
  struct CosetKey {
    int state;
    ReducedWord suffix;
    friend bool operator==(const CosetKey&, const CosetKey&) = default;
    friend auto operator<=>(const CosetKey&, const CosetKey&) = default;
  };
  CosetKey right_coset(const ReducedWord& w) const;

  /// Each state has at most one outgoing edge per label; every generator reads a
  /// loop at the base state.
  bool is_folded() const noexcept;

 private:
  friend SubgroupGraph stallings_build(int rank, std::span<const ReducedWord> gens);
  std::size_t alphabet_size() const noexcept { return static_cast<std::size_t>(2 * rank_); }

  int rank_ = 2;
  std::vector<int> delta_;
  std::vector<ReducedWord> generators_;
};

/// Wedge of loops, one per generator, folded to a deterministic automaton.
SubgroupGraph stallings_build(int rank, std::span<const ReducedWord> gens);

inline bool membership(const SubgroupGraph& g, const ReducedWord& w) { return g.accepts(w); }

}  // namespace mls
