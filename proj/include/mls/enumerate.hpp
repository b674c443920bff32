#pragma once

// Ball enumeration {x : d(o,x) <= T} for enumerable metrics.
//
// Word metrics of the basis or of a factor-closed set, and nonnegative
// combinations of those, have costs that never decrease along prefixes of
// reduced words, so a depth-first walk over reduced words can prune at T.
// Pulled-back metrics walk the inner ball and map it through phi^-1. Other
// word metrics fall back to the memoized BFS ball.
//
// The ball is split into chunks that depend only on the metric and T: chunk 0
// holds the words of length <= 1 and chunk i > 0 the words starting with the
// i-th two-letter prefix. Visits inside a chunk follow a fixed order, so
// per-chunk results merged in chunk order are independent of the worker count.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mls/metric.hpp"
#include "mls/parallel.hpp"

namespace mls {

using BallVisitor = std::function<void(std::span<const Letter> x, double d)>;

class BallPlan {
 public:
  /// Throws PreconditionViolated when the metric has no finite ball
  /// enumeration (matrix norms, coned-off metrics).
  BallPlan(const MetricHandle& m, double T);

  std::size_t num_chunks() const noexcept;
  /// Visits every element of chunk `chunk` exactly once, in a fixed order.
  void walk(std::size_t chunk, const BallVisitor& visit) const;

  double radius() const noexcept { return T_; }
  int rank() const noexcept { return rank_; }

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
  double T_;
  int rank_;
};

/// True when BallPlan accepts the metric.
bool is_enumerable(const MetricHandle& m) noexcept;

/// Runs `visit(acc, x, d)` over the ball with one accumulator per chunk and
/// returns the accumulators in chunk order.
template <typename Acc, typename Visit>
std::vector<Acc> visit_ball(const BallPlan& plan, int workers, Visit&& visit) {
  return parallel_chunks<Acc>(plan.num_chunks(), workers, [&](std::size_t chunk) {
    Acc acc{};
    plan.walk(chunk, [&](std::span<const Letter> x, double d) { visit(acc, x, d); });
    return acc;
  });
}

}  // namespace mls
