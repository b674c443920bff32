#pragma once

// Element and conjugacy-class censuses, counting sequences and growth
// estimates.

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mls/metric.hpp"
#include "mls/packed_word.hpp"
#include "mls/stallings.hpp"

namespace mls {

struct EnumOptions {
  int workers = 1;
  std::size_t max_rows = 20'000'000;
  int bracket_depth = 16;  // Fekete depth for translation brackets
};

struct ElementRow {
  PackedWord word;
  double d;
  double d_star;  // NaN for single-metric censuses
};

/// {x : d(o,x) <= T}; rows follow the chunked enumeration order.
struct ElementCensus {
  double radius = 0;
  bool joint = false;
  std::vector<ElementRow> rows;
};

struct ConjRow {
  CyclicWord cls;
  LengthBracket ell;
  std::optional<LengthBracket> ell_star;
  bool straddles = false;  // ell bracket contains the radius strictly inside
};

/// Non-identity classes with ell lower bound <= T, sorted by canonical word.
struct ConjCensus {
  double radius = 0;
  bool exact = false;  // necklace enumeration with exact lengths
  bool joint = false;
  std::vector<ConjRow> rows;
};

/// Row predicate. Tolerance and equality filters need joint rows.
class Filter {
 public:
  enum class Kind { All, HomologyClass, Subgroup, CommutatorSubgroup, Tolerance, Equality };

  static Filter all();
  static Filter homology_class(std::vector<int> cls);
  static Filter subgroup(SubgroupGraph H);
  static Filter commutator_subgroup();
  /// |l_d - l_d*| <= c * l_d^p with p < 1.
  static Filter tolerance(double c = 1.0, double p = 0.5);
  /// v_d l_d = v_d* l_d* up to a relative tolerance.
  static Filter equality(double v_d, double v_d_star, double rel_tol = 1e-9);

  Kind kind() const noexcept { return kind_; }
  std::string describe() const;

  bool accepts_element(std::span<const Letter> x, double d, double d_star) const;
  /// Subgroup filters accept a class when some conjugate lies in H.
  bool accepts_class(const ConjRow& row) const;

 private:
  Kind kind_ = Kind::All;
  std::vector<int> homology_;
  std::optional<SubgroupGraph> subgroup_;
  double c_ = 1;
  double p_ = 0.5;
  double v_ = 1;
  double v_star_ = 1;
  double rel_tol_ = 1e-9;
};

struct CountPoint {
  double T;
  std::uint64_t N;
};
using CountingSequence = std::vector<CountPoint>;

struct GrowthEstimate {
  double rate = 0;           // primary value, the annulus ratio
  double annulus = 0;        // mean of log(A_i/A_{i-1})/(T_i - T_{i-1}), A_i = N(T_i) - N(T_{i-1}), over the window
  double linear_fit = 0;     // least-squares slope of log N against T
  double corrected_fit = 0;  // slope v of log N = v T - p log T + c
  double prefactor = 0;      // fitted p
  double window_min = 0;
  double window_max = 0;
  double residual = 0;       // max |log N - linear fit| over the window
  bool degenerate = false;
  std::string method = "annulus-ratio";
};

// Enumeration.

ElementCensus enumerate_elements(const MetricHandle& m, double T, const EnumOptions& options = {});
ElementCensus enumerate_joint_elements(const MetricHandle& d, const MetricHandle& d_star, double T,
                                       const EnumOptions& options = {});
ConjCensus enumerate_conjugacy(const MetricHandle& m, double T, const EnumOptions& options = {});
ConjCensus enumerate_joint_conjugacy(const MetricHandle& d, const MetricHandle& d_star, double T,
                                     const EnumOptions& options = {});

/// Streams the ball without storing it; N(t) for t = 0, 1, ..., floor(T).
CountingSequence count_ball(const MetricHandle& m, double T, const Filter& filter = Filter::all(),
                            const EnumOptions& options = {});

// Counting sequences at integer radii.

CountingSequence ball_counts(const ElementCensus& c, const Filter& filter = Filter::all());
CountingSequence class_counts(const ConjCensus& c, const Filter& filter = Filter::all());
std::vector<std::uint64_t> sphere_sizes(const CountingSequence& ball);

// Growth.

GrowthEstimate growth_rate(std::span<const CountPoint> counts, std::size_t window = 4);
GrowthEstimate restricted_growth(const ElementCensus& c, const Filter& filter, std::size_t window = 4);
GrowthEstimate restricted_growth(const ConjCensus& c, const Filter& filter, std::size_t window = 4);

/// N(T) of classes passing an equality or tolerance filter on a joint census.
CountingSequence correlation_census(const ConjCensus& c, const Filter& mode);

struct ConjugateCountCheck {
  std::uint64_t count;  // #{y in [x] : d(o,y) <= T}
  double ell;
  double lhs;           // log(count), -inf when the count is 0
  double rhs;           // log(ell + C) + v (T - ell)/2 + C
  bool holds;
};
/// Orbit enumeration over conjugators in a basis ball large enough to reach
/// every conjugate with d(o,y) <= T. Needs a word metric.
ConjugateCountCheck conjugate_count_bound_check(const MetricHandle& m, const ReducedWord& x, double T, double C,
                                                double v);

struct IntersectionNumber {
  double tau;       // mean of d*/T over the ball of radius T
  double tau_prev;  // same at T - 1
  double radius;
};
IntersectionNumber intersection_number(const ElementCensus& c);

/// Compact joint census: counts of elements by (d, d*) value pairs, sorted.
struct HistogramCell {
  double d;
  double d_star;
  std::uint64_t count;
};
struct JointHistogram {
  double radius = 0;
  std::vector<HistogramCell> cells;
  std::uint64_t total() const noexcept;
};
JointHistogram joint_histogram(const MetricHandle& d, const MetricHandle& d_star, double T,
                               const EnumOptions& options = {});
JointHistogram joint_histogram(const ElementCensus& c);
IntersectionNumber intersection_number(const JointHistogram& h);

// CSV.

void write_counts_csv(std::ostream& os, const CountingSequence& counts);
void write_census_csv(std::ostream& os, const ElementCensus& c);
std::string format_double(double v);

}  // namespace mls
