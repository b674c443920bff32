#pragma once

// Small dense matrix kernel: spectral radius, operator norm, singular values,
// and representations of F_k by matrices. Everything is templated on the Eigen
// expression type; 2x2 inputs take closed forms.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "mls/error.hpp"
#include "mls/words.hpp"

namespace mls {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

template <typename Scalar>
Scalar spectral_radius_2x2(Scalar a, Scalar b, Scalar c, Scalar d) {
  using std::abs;
  using std::sqrt;
  const Scalar half_tr = (a + d) / 2;
  const Scalar det = a * d - b * c;
  const Scalar disc = half_tr * half_tr - det;
  if (disc >= 0) {
    const Scalar r = sqrt(disc);
    return std::max(abs(half_tr + r), abs(half_tr - r));
  }
  return sqrt(det);  // complex pair, |lambda|^2 = det > 0
}

template <typename Scalar>
std::pair<Scalar, Scalar> singular_values_2x2(Scalar a, Scalar b, Scalar c, Scalar d) {
  using std::abs;
  using std::sqrt;
  // Eigenvalues of A^T A = [[e, f], [f, g]].
  const Scalar e = a * a + c * c;
  const Scalar f = a * b + c * d;
  const Scalar g = b * b + d * d;
  const Scalar mid = (e + g) / 2;
  const Scalar rad = std::hypot((e - g) / 2, f);
  const Scalar s1 = sqrt(mid + rad);
  // sigma_1 * sigma_2 = |det| avoids cancellation in mid - rad.
  const Scalar det = abs(a * d - b * c);
  const Scalar s2 = s1 > 0 ? det / s1 : Scalar(0);
  return {s1, s2};
}

}  // namespace detail

/// Largest modulus of an eigenvalue.
template <typename Derived>
typename Derived::Scalar spectral_radius(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  if (A.rows() != A.cols()) throw Error(ErrorKind::InvalidArgument, "spectral_radius needs a square matrix");
  if (A.rows() == 1) return std::abs(A(0, 0));
  if (A.rows() == 2) return detail::spectral_radius_2x2<Scalar>(A(0, 0), A(0, 1), A(1, 0), A(1, 1));
  Eigen::EigenSolver<MatrixX<Scalar>> es(A.eval(), false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Smallest modulus of an eigenvalue.
template <typename Derived>
typename Derived::Scalar smallest_eigenvalue_modulus(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  if (A.rows() == 2) {
    const Scalar r = spectral_radius(A);
    const Scalar det = std::abs(A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0));
    return r > 0 ? det / r : Scalar(0);
  }
  Eigen::EigenSolver<MatrixX<Scalar>> es(A.eval(), false);
  return es.eigenvalues().cwiseAbs().minCoeff();
}

/// Euclidean operator norm (largest singular value).
template <typename Derived>
typename Derived::Scalar operator_norm(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  if (A.rows() == 2 && A.cols() == 2) {
    return detail::singular_values_2x2<Scalar>(A(0, 0), A(0, 1), A(1, 0), A(1, 1)).first;
  }
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(A.eval());
  return svd.singularValues()(0);
}

/// Top two singular values (sigma_1 >= sigma_2).
template <typename Derived>
std::pair<typename Derived::Scalar, typename Derived::Scalar> top_singular_values(
    const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  if (A.rows() < 2 || A.cols() < 2) throw Error(ErrorKind::InvalidArgument, "need at least a 2x2 matrix");
  if (A.rows() == 2 && A.cols() == 2) {
    return detail::singular_values_2x2<Scalar>(A(0, 0), A(0, 1), A(1, 0), A(1, 1));
  }
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(A.eval());
  return {svd.singularValues()(0), svd.singularValues()(1)};
}

template <typename Scalar>
struct RadiusBracket {
  Scalar lower;
  Scalar upper;
  int iterations;
  bool converged;
};

/// Gelfand estimate by repeated squaring of the normalized matrix:
/// lambda_1 = lim ||A^(2^k)||^(2^-k). Independent of any eigen-solver. Every
/// iterate is an upper bound for lambda_1; the bracket spans the last two
/// iterates.
template <typename Derived>
RadiusBracket<typename Derived::Scalar> gelfand_spectral_radius(const Eigen::MatrixBase<Derived>& A,
                                                                double tol = 1e-10, int max_iter = 60) {
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> P = A;
  Scalar log_scale = 0;  // log of the factor divided out so far, per unit power
  Scalar power = 1;
  Scalar prev = std::numeric_limits<Scalar>::infinity();
  for (int k = 0; k < max_iter; ++k) {
    const Scalar n = P.norm();  // Frobenius; any norm works in the limit
    if (n == 0) return {0, 0, k, true};
    P /= n;
    log_scale += std::log(n) / power;
    const Scalar estimate = std::exp(log_scale + std::log(operator_norm(P)) / power);
    if (std::abs(estimate - prev) <= tol * std::max<Scalar>(1, std::abs(estimate))) {
      return {std::min(estimate, prev), std::max(estimate, prev), k, true};
    }
    prev = estimate;
    P = (P * P).eval();
    power *= 2;
  }
  return {prev, prev, max_iter, false};
}

/// Operator norm by power iteration on A^T A.
template <typename Derived>
typename Derived::Scalar power_iteration_norm(const Eigen::MatrixBase<Derived>& A, double tol = 1e-12,
                                              int max_iter = 10000) {
  using Scalar = typename Derived::Scalar;
  const MatrixX<Scalar> M = A.transpose() * A;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Ones(M.cols());
  // Deterministic start with no symmetry that could hide the top direction.
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) += Scalar(0.1) * static_cast<Scalar>(i);
  v.normalize();
  Scalar lambda = 0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w = M * v;
    const Scalar next = w.norm();
    if (next == 0) return 0;
    v = w / next;
    if (std::abs(next - lambda) <= tol * next) {
      lambda = next;
      return std::sqrt(lambda);
    }
    lambda = next;
  }
  throw Error(ErrorKind::NoConvergence, "power iteration did not converge; last value " +
                                            std::to_string(std::sqrt(static_cast<double>(lambda))));
}

/// Homomorphism F_k -> GL_m given by generator matrices; inverses are computed
/// and checked.
template <typename Scalar>
class Representation {
 public:
  using Matrix = MatrixX<Scalar>;

  explicit Representation(std::vector<Matrix> generators) : images_(std::move(generators)) {
    if (images_.size() < 2) throw Error(ErrorKind::InvalidArgument, "representation needs rank >= 2");
    dim_ = images_.front().rows();
    std::vector<Matrix> all;
    for (const auto& g : images_) {
      if (g.rows() != dim_ || g.cols() != dim_) {
        throw Error(ErrorKind::InvalidArgument, "generator matrices must be square of equal dimension");
      }
      Eigen::FullPivLU<Matrix> lu(g);
      if (!lu.isInvertible()) throw Error(ErrorKind::InvalidArgument, "generator matrix is singular");
      Matrix inv = lu.inverse();
      if (!((g * inv) - Matrix::Identity(dim_, dim_)).isZero(1e-10)) {
        throw Error(ErrorKind::InvalidArgument, "generator inverse is numerically unstable");
      }
      all.push_back(g);
      all.push_back(std::move(inv));
    }
    letters_ = std::move(all);
    normalized_ = std::all_of(images_.begin(), images_.end(), [](const Matrix& m) {
      return std::abs(std::abs(m.determinant()) - Scalar(1)) <= Scalar(1e-10);
    });
  }

  int rank() const noexcept { return static_cast<int>(images_.size()); }
  Eigen::Index dim() const noexcept { return dim_; }
  bool determinant_normalized() const noexcept { return normalized_; }

  const Matrix& letter(Letter l) const {
    if (l >= letters_.size()) throw Error(ErrorKind::InvalidArgument, "letter outside representation rank");
    return letters_[l];
  }

  Matrix operator()(std::span<const Letter> w) const {
    Matrix out = Matrix::Identity(dim_, dim_);
    for (Letter l : w) out = (out * letter(l)).eval();
    return out;
  }
  Matrix operator()(const ReducedWord& w) const { return (*this)(w.letters()); }

 private:
  std::vector<Matrix> images_;
  std::vector<Matrix> letters_;  // indexed by Letter
  Eigen::Index dim_ = 0;
  bool normalized_ = false;
};

/// 2x2 rotation by angle theta.
template <typename Scalar>
MatrixX<Scalar> rotation2(Scalar theta) {
  MatrixX<Scalar> r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

/// Schottky pair: a = diag(s, 1/s) and b = R a R^-1 with R the rotation by
/// `angle`.
template <typename Scalar>
Representation<Scalar> schottky_pair(Scalar stretch, Scalar angle) {
  MatrixX<Scalar> a(2, 2);
  a << stretch, 0, 0, 1 / stretch;
  const MatrixX<Scalar> r = rotation2(angle);
  MatrixX<Scalar> b = r * a * r.transpose();
  return Representation<Scalar>({a, b});
}

}  // namespace mls
