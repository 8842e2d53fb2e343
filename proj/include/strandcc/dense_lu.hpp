#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

namespace strandcc {

/// LU factorization with partial (row) pivoting, PA = LU, for small dense
/// real or complex systems. A pivot whose magnitude falls below
/// `relative_threshold` times the largest entry of A marks the matrix
/// singular; factor() then returns the failing column.
template <typename Scalar>
class DenseLu {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  /// Returns std::nullopt on success, or the column index of the first pivot
  /// that failed the threshold.
  std::optional<Eigen::Index> factor(const Matrix& a, double relative_threshold) {
    lu_ = a;
    const Eigen::Index n = lu_.rows();
    perm_.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) perm_[static_cast<std::size_t>(i)] = i;

    scale_ = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) scale_ = std::max(scale_, static_cast<double>(std::abs(a(i, j))));
    const double threshold = relative_threshold * scale_;
    min_pivot_ = scale_;

    for (Eigen::Index k = 0; k < n; ++k) {
      Eigen::Index pivot = k;
      double best = std::abs(lu_(k, k));
      for (Eigen::Index i = k + 1; i < n; ++i) {
        const double v = std::abs(lu_(i, k));
        if (v > best) {
          best = v;
          pivot = i;
        }
      }
      min_pivot_ = std::min(min_pivot_, best);
      if (!(best > threshold)) return k;
      if (pivot != k) {
        lu_.row(k).swap(lu_.row(pivot));
        std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(pivot)]);
      }
      for (Eigen::Index i = k + 1; i < n; ++i) {
        const Scalar factor = lu_(i, k) / lu_(k, k);
        lu_(i, k) = factor;
        for (Eigen::Index j = k + 1; j < n; ++j) lu_(i, j) -= factor * lu_(k, j);
      }
    }
    return std::nullopt;
  }

  Vector solve(const Vector& b) const {
    const Eigen::Index n = lu_.rows();
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = b(perm_[static_cast<std::size_t>(i)]);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < i; ++j) x(i) -= lu_(i, j) * x(j);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      for (Eigen::Index j = i + 1; j < n; ++j) x(i) -= lu_(i, j) * x(j);
      x(i) /= lu_(i, i);
    }
    return x;
  }

  double scale() const noexcept { return scale_; }
  double min_pivot() const noexcept { return min_pivot_; }

 private:
  Matrix lu_;
  std::vector<Eigen::Index> perm_;
  double scale_ = 0.0;
  double min_pivot_ = 0.0;
};

}  // namespace strandcc
