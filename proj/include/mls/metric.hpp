#pragma once

// Evaluatable Gamma-invariant distance-like functions d(o, .) on F_k.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mls/linalg.hpp"
#include "mls/segmentation.hpp"
#include "mls/stallings.hpp"
#include "mls/words.hpp"

namespace mls {

/// Finite symmetric generating set without the identity, kept in shortlex
/// order.
class GeneratingSet {
 public:
  static GeneratingSet standard_basis(int rank);
  /// Adds inverses, drops the identity and duplicates, and checks by BFS that
  /// every basis letter is reachable within `bfs_budget` elements.
  static GeneratingSet from_words(int rank, std::vector<ReducedWord> words, std::size_t bfs_budget = 200000);

  int rank() const noexcept { return rank_; }
  std::span<const ReducedWord> elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  std::size_t max_length() const noexcept;
  bool is_standard_basis() const noexcept;
  /// Every nonempty subword of every generator is again a generator.
  bool is_factor_closed() const noexcept;
  bool contains(const ReducedWord& w) const;

 private:
  int rank_ = 2;
  std::vector<ReducedWord> elements_;
};

enum class MetricKind { Word, PulledBack, Combination, MatrixLogNorm, SymmetrizedMatrixLogNorm, ConedOff };

const char* to_string(MetricKind kind) noexcept;

struct MetricOptions {
  std::optional<double> delta;     // hyperbolicity constant
  std::optional<double> alpha_rg;  // rough-geodesic constant
  std::size_t node_budget = 4'000'000;
  int coned_universe_radius = 6;   // S-ball used as the truncated universe for ConedOff
};

struct LengthBracket {
  double lower = 0;
  double upper = 0;
  int n_used = 0;
  bool exact() const noexcept { return lower == upper; }
  bool contains(double v, double tol = 0) const noexcept { return v >= lower - tol && v <= upper + tol; }
};

/// Shared handle: copies share one immutable description and one grow-only
/// distance memo, so concurrent queries are safe.
class MetricHandle {
 public:
  static MetricHandle word(GeneratingSet S, MetricOptions options = {});
  static MetricHandle pulled_back(Automorphism phi, MetricHandle inner, MetricOptions options = {});
  static MetricHandle combination(double s, MetricHandle d1, double t, MetricHandle d2,
                                  MetricOptions options = {});
  static MetricHandle matrix_log_norm(Representation<double> rho, MetricOptions options = {});
  static MetricHandle symmetrized_matrix_log_norm(Representation<double> rho, MetricOptions options = {});
  static MetricHandle coned_off(GeneratingSet S, SubgroupGraph H, MetricOptions options = {});

  MetricKind kind() const noexcept;
  int rank() const noexcept;
  bool symmetric() const noexcept;
  bool integer_valued() const noexcept;
  std::string describe() const;
  const MetricOptions& options() const noexcept;

  /// Supplied constant, else 0 for a free basis, else the empirical
  /// four-point estimate (a lower bound for the true value).
  double delta() const;
  double alpha_rg() const;

  double distance(const ReducedWord& x) const;
  double distance(std::span<const Letter> reduced) const;

  /// Exact stable translation length when an exact algorithm exists.
  std::optional<double> exact_translation_length(const ReducedWord& x) const;

  // Structure, for enumeration.
  const GeneratingSet* generating_set() const noexcept;
  const Segmenter* segmenter() const noexcept;  // factor-closed word metrics only
  const Automorphism* automorphism() const noexcept;
  const MetricHandle* inner() const noexcept;
  std::pair<const MetricHandle*, const MetricHandle*> components() const noexcept;
  std::pair<double, double> coefficients() const noexcept;
  const Representation<double>* representation() const noexcept;
  const SubgroupGraph* subgroup() const noexcept;

  /// Word-metric BFS ball (non-factor-closed sets): all elements at distance
  /// <= radius, in shortlex order.
  std::vector<std::pair<ReducedWord, int>> bfs_ball(int radius) const;

  struct Impl;

 private:
  explicit MetricHandle(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;
};

inline double distance(const MetricHandle& m, const ReducedWord& x) { return m.distance(x); }

/// l_S[c] for the standard basis: the cyclically reduced length.
double translation_length_exact(const GeneratingSet& S, const CyclicWord& c);

/// Fekete bracket: upper = min_{n<=N} d(o,x^n)/n, lower = max_{n<=N/2}
/// (d(o,x^2n) - d(o,x^n) - 2 delta)/n clamped at 0.
LengthBracket translation_length_bracket(const MetricHandle& m, const ReducedWord& x, int N);

/// Exact value as a degenerate bracket when available, otherwise the Fekete
/// bracket at depth N.
LengthBracket translation_length(const MetricHandle& m, const ReducedWord& x, int N = 16);

/// S_n = {x : psi(o,x) <= n} minus the identity.
GeneratingSet threshold_generating_set(const MetricHandle& m, double n);

struct SandwichCheck {
  int word_length;  // |x|_{S_n}
  double psi;
  double lower;
  double upper;
  bool holds;
};
/// (n - alpha - 1)|x|_{S_n} - (n - 1) <= psi(o,x) <= n |x|_{S_n}.
SandwichCheck verify_sandwich(const MetricHandle& m, const GeneratingSet& S_n, double n, const ReducedWord& x);

/// BFS distance in the coned-off Cayley graph Cay(F_k, S, H) restricted to
/// the S-ball of radius `universe_radius`; an upper bound of the true value.
double coned_off_distance(const GeneratingSet& S, const SubgroupGraph& H, const ReducedWord& x,
                          int universe_radius);

/// Largest four-point defect over sampled quadruples from the radius-`radius`
/// basis ball; a lower bound for delta.
double estimate_delta(const MetricHandle& m, int sample_size, std::uint64_t seed = 1, int radius = 5);

}  // namespace mls
