#pragma once

// Joint spectral radius, Bochi's bound, joint translation lengths and the
// closed-form rigidity and geometry bounds.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mls/census.hpp"
#include "mls/error.hpp"
#include "mls/linalg.hpp"
#include "mls/metric.hpp"
#include "mls/parallel.hpp"

namespace mls {

/// Finite set of nonzero square matrices of one dimension.
template <typename Scalar>
class MatrixSet {
 public:
  using Matrix = MatrixX<Scalar>;

  explicit MatrixSet(std::vector<Matrix> matrices) : matrices_(std::move(matrices)) {
    if (matrices_.empty()) throw Error(ErrorKind::InvalidArgument, "empty matrix set");
    dim_ = matrices_.front().rows();
    for (const auto& A : matrices_) {
      if (A.rows() != dim_ || A.cols() != dim_) {
        throw Error(ErrorKind::InvalidArgument, "matrices must be square of equal dimension");
      }
      if (A.isZero(0)) throw Error(ErrorKind::InvalidArgument, "zero matrix in set");
    }
  }

  Eigen::Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return matrices_.size(); }
  const Matrix& operator[](std::size_t i) const noexcept { return matrices_[i]; }
  const std::vector<Matrix>& matrices() const noexcept { return matrices_; }

 private:
  std::vector<Matrix> matrices_;
  Eigen::Index dim_ = 0;
};

/// m x m matrices with entries uniform in [lo, hi].
template <typename Scalar>
MatrixSet<Scalar> random_matrix_set(std::mt19937_64& rng, Eigen::Index m, std::size_t count, Scalar lo = -1,
                                    Scalar hi = 1) {
  std::uniform_real_distribution<Scalar> u(lo, hi);
  std::vector<MatrixX<Scalar>> out;
  while (out.size() < count) {
    MatrixX<Scalar> A(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) A(i, j) = u(rng);
    }
    if (!A.isZero(0)) out.push_back(std::move(A));
  }
  return MatrixSet<Scalar>(std::move(out));
}

struct SandwichEstimate {
  double lower = 0;
  double upper = 0;
  int depth = 0;
  bool subsampled = false;
};

struct ProductOptions {
  int workers = 1;
  std::uint64_t budget = 50'000'000;  // products enumerated
  std::uint64_t seed = 1;             // used only when subsampling
  std::uint64_t samples_per_length = 200'000;
};

namespace detail {

inline std::uint64_t saturating_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > UINT64_MAX / std::max<std::uint64_t>(base, 1)) return UINT64_MAX;
    r *= base;
  }
  return r;
}

inline std::uint64_t product_count(std::size_t n, int depth) {
  std::uint64_t total = 0;
  for (int j = 1; j <= depth; ++j) {
    const std::uint64_t c = saturating_pow(n, j);
    if (total > UINT64_MAX - c) return UINT64_MAX;
    total += c;
  }
  return total;
}

/// Per length j: max norm and max spectral radius over S^j.
struct LevelMax {
  std::vector<double> norm;
  std::vector<double> radius;
};

template <typename Mat>
void product_dfs(const std::vector<Mat>& S, const Mat& P, int j, int depth, bool want_norm, LevelMax& out) {
  for (const Mat& A : S) {
    const Mat Q = P * A;
    const auto k = static_cast<std::size_t>(j);
    out.radius[k] = std::max(out.radius[k], static_cast<double>(spectral_radius(Q)));
    if (want_norm) out.norm[k] = std::max(out.norm[k], static_cast<double>(operator_norm(Q)));
    if (j < depth) product_dfs(S, Q, j + 1, depth, want_norm, out);
  }
}

template <typename Mat>
LevelMax level_maxima_exact(const std::vector<Mat>& S, int depth, bool want_norm, int workers) {
  // Chunks are the first factor; max-folds make the merge order irrelevant.
  auto parts = parallel_chunks<LevelMax>(S.size(), workers, [&](std::size_t i) {
    LevelMax lm{std::vector<double>(static_cast<std::size_t>(depth) + 1, 0.0),
                std::vector<double>(static_cast<std::size_t>(depth) + 1, 0.0)};
    const Mat& A = S[i];
    lm.radius[1] = static_cast<double>(spectral_radius(A));
    if (want_norm) lm.norm[1] = static_cast<double>(operator_norm(A));
    if (depth > 1) product_dfs(S, A, 2, depth, want_norm, lm);
    return lm;
  });
  LevelMax out{std::vector<double>(static_cast<std::size_t>(depth) + 1, 0.0),
               std::vector<double>(static_cast<std::size_t>(depth) + 1, 0.0)};
  for (const auto& p : parts) {
    for (std::size_t k = 0; k < out.norm.size(); ++k) {
      out.norm[k] = std::max(out.norm[k], p.norm[k]);
      out.radius[k] = std::max(out.radius[k], p.radius[k]);
    }
  }
  return out;
}

template <typename Mat>
LevelMax level_maxima(const std::vector<Mat>& S, int depth, bool want_norm, const ProductOptions& options,
                      bool& subsampled) {
  subsampled = false;
  // Exhaustive up to the deepest level inside the budget, sampled beyond.
  int exact_depth = depth;
  while (exact_depth > 0 && product_count(S.size(), exact_depth) > options.budget) --exact_depth;
  LevelMax out = exact_depth > 0
                     ? level_maxima_exact(S, exact_depth, want_norm, options.workers)
                     : LevelMax{std::vector<double>(1, 0.0), std::vector<double>(1, 0.0)};
  out.norm.resize(static_cast<std::size_t>(depth) + 1, 0.0);
  out.radius.resize(static_cast<std::size_t>(depth) + 1, 0.0);
  if (exact_depth == depth) return out;
  subsampled = true;
  std::seed_seq seq{options.seed, std::uint64_t{0xb0c41}};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<std::size_t> pick(0, S.size() - 1);
  for (int j = exact_depth + 1; j <= depth; ++j) {
    const auto k = static_cast<std::size_t>(j);
    for (std::uint64_t s = 0; s < options.samples_per_length; ++s) {
      Mat P = S[pick(rng)];
      for (int i = 1; i < j; ++i) P = (P * S[pick(rng)]).eval();
      out.radius[k] = std::max(out.radius[k], static_cast<double>(spectral_radius(P)));
      if (want_norm) out.norm[k] = std::max(out.norm[k], static_cast<double>(operator_norm(P)));
    }
  }
  return out;
}

template <typename Scalar, typename Fn>
auto with_fixed_size(const MatrixSet<Scalar>& S, Fn&& fn) {
  if (S.dim() == 2) {
    std::vector<Eigen::Matrix<Scalar, 2, 2>> fixed;
    for (const auto& A : S.matrices()) fixed.emplace_back(A);
    return fn(fixed);
  }
  return fn(S.matrices());
}

}  // namespace detail

/// upper = min_n (max_{A in S^n} ||A||)^(1/n), lower = max_n (max_{A in S^n}
/// lambda_1(A))^(1/n), n <= N.
template <typename Scalar>
SandwichEstimate jsr_estimate(const MatrixSet<Scalar>& S, int N, const ProductOptions& options = {}) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "depth must be >= 1");
  if (detail::product_count(S.size(), N) > options.budget) {
    throw Error(ErrorKind::BudgetExceeded, "|S|^N products exceed the budget");
  }
  bool subsampled = false;
  const detail::LevelMax lm =
      detail::with_fixed_size(S, [&](const auto& mats) { return detail::level_maxima(mats, N, true, options, subsampled); });
  SandwichEstimate e;
  e.depth = N;
  e.upper = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= N; ++n) {
    const auto k = static_cast<std::size_t>(n);
    e.upper = std::min(e.upper, std::pow(lm.norm[k], 1.0 / n));
    e.lower = std::max(e.lower, std::pow(lm.radius[k], 1.0 / n));
  }
  // lambda_1 <= norm holds exactly; only rounding can invert the pair.
  if (e.lower > e.upper && e.lower - e.upper <= 1e-12 * e.upper) e.lower = e.upper;
  return e;
}

inline double bochi_default_c(int m) { return 8 * std::log(2.0) + 5 * std::log(static_cast<double>(m)); }
inline int bochi_default_d(int m) { return 2 * m * m * m; }

struct BochiResult {
  double value = 0;  // e^{c_m} max_{j <= d_m} max_{A in S^j} lambda_1(A)^(1/j)
  double c_m = 0;
  int d_m = 0;
  bool subsampled = false;  // some S^j sampled: a randomized lower estimate of the right-hand side
};

template <typename Scalar>
BochiResult bochi_bound(const MatrixSet<Scalar>& S, std::optional<double> c_m = std::nullopt,
                        std::optional<int> d_m = std::nullopt, const ProductOptions& options = {}) {
  BochiResult r;
  const int m = static_cast<int>(S.dim());
  r.c_m = c_m.value_or(bochi_default_c(m));
  r.d_m = d_m.value_or(bochi_default_d(m));
  if (r.d_m < 1) throw Error(ErrorKind::InvalidArgument, "d_m must be >= 1");
  const detail::LevelMax lm = detail::with_fixed_size(
      S, [&](const auto& mats) { return detail::level_maxima(mats, r.d_m, false, options, r.subsampled); });
  double best = 0;
  for (int j = 1; j <= r.d_m; ++j) best = std::max(best, std::pow(lm.radius[static_cast<std::size_t>(j)], 1.0 / j));
  r.value = std::exp(r.c_m) * best;
  return r;
}

/// upper = min_n max_{w in S^n} psi(o,w)/n, lower = max_{j <= N, w in S^j}
/// l_lower(w)/j.
SandwichEstimate joint_translation_length(const MetricHandle& psi, std::span<const ReducedWord> S, int N,
                                          std::uint64_t budget = 5'000'000);

/// Formula evaluation with its inputs echoed.
struct BoundReport {
  std::string formula;
  std::vector<std::pair<std::string, double>> inputs;
  double value = 0;
  std::vector<std::pair<std::string, double>> outputs;  // named derived quantities

  double output(const std::string& name) const;
};

inline constexpr double kDefaultK = 38.0;  // placeholder for the universal constant K

/// c_m d_m/(L - d_m(alpha+1)) + eta L/(L - d_m(alpha+1)).
BoundReport rigidity_bound_anosov(double L, double eta, double alpha_rg, int m, std::optional<double> c_m = std::nullopt,
                                  std::optional<int> d_m = std::nullopt);
/// 2 K delta/(L - 2(alpha+1)) + eta L/(L - 2(alpha+1)).
BoundReport rigidity_bound_hyperbolic(double L, double eta, double alpha_rg, double delta, double K = kDefaultK);
/// Volume, diameter, hyperbolicity, roughness and growth bounds of a negatively
/// curved closed manifold, and the normalized (delta, alpha).
BoundReport geometry_bounds(int n, double simplicial_volume, double lambda, double Lambda, double i_g, double C_n);
/// Constants of the length-spectrum rigidity theorem for closed manifolds.
BoundReport butt_constants(int n, double simplicial_volume, double lambda, double Lambda, double i_g, double eps0,
                           double K, double R, double C_n);

std::string bound_report_json(const BoundReport& r);

struct DominationProfile {
  double slope = 0;      // least-squares slope of log(s1/s2) against word length
  double intercept = 0;
  double min_log_ratio = 0;  // over non-identity elements
  std::size_t samples = 0;
  bool dominated = false;    // slope > 1e-6
  bool parabolic_generator = false;  // some generator has lambda_1 = 1 within 1e-9
};
DominationProfile domination_profile(const Representation<double>& rho, const ElementCensus& c);

}  // namespace mls
