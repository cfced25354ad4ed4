#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "pcep/dataset.hpp"
#include "pcep/errors.hpp"
#include "pcep/model_indicator.hpp"

namespace pcep {

/// Relative tolerance on the QR R-diagonal below which a design is singular.
inline constexpr double kRankTolerance = 1e-10;

/// Full-rank n x d design with its cross-product and thin orthonormal factor.
///
/// The hat projection H = X (X'X)^-1 X' is applied through the thin Q factor,
/// never formed as an n x n matrix.
template <typename Scalar>
class DesignMatrix {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit DesignMatrix(Matrix columns, std::uint64_t gamma = 0)
      : x_(std::move(columns)), gamma_(gamma) {
    if (x_.cols() == 0 || x_.rows() < x_.cols())
      throw SingularityError("design has more columns than rows", gamma_);
    Eigen::HouseholderQR<Matrix> qr(x_);
    r_ = qr.matrixQR().topRows(x_.cols()).template triangularView<Eigen::Upper>();
    const Vector diag = r_.diagonal().cwiseAbs();
    if (diag.minCoeff() <= Scalar(kRankTolerance) * diag.maxCoeff())
      throw SingularityError("rank-deficient design matrix", gamma_);
    q_ = qr.householderQ() * Matrix::Identity(x_.rows(), x_.cols());
    gram_ = x_.transpose() * x_;
    gram_ = Scalar(0.5) * (gram_ + gram_.transpose()).eval();
    colsum_ = x_.colwise().sum().transpose();
  }

  Eigen::Index rows() const { return x_.rows(); }
  Eigen::Index dim() const { return x_.cols(); }
  std::uint64_t gamma() const { return gamma_; }

  const Matrix& full() const { return x_; }
  const Matrix& gram() const { return gram_; }
  /// Upper-triangular R with X = QR, so X'X = R'R.
  const Matrix& r() const { return r_; }
  const Matrix& q() const { return q_; }
  /// X'1, the column sums.
  const Vector& column_sums() const { return colsum_; }

  /// True when the first column is identically one.
  bool has_intercept() const { return (x_.col(0).array() == Scalar(1)).all(); }

  Scalar log_det_gram() const {
    return Scalar(2) * r_.diagonal().cwiseAbs().array().log().sum();
  }

  template <typename Derived>
  Vector hat(const Eigen::MatrixBase<Derived>& v) const {
    return q_ * (q_.transpose() * v);
  }

  /// v'Hv.
  template <typename Derived>
  Scalar hat_quadratic(const Eigen::MatrixBase<Derived>& v) const {
    return (q_.transpose() * v).squaredNorm();
  }

  /// (X'X)^-1 rhs via the triangular factor.
  template <typename Derived>
  Matrix solve_gram(const Eigen::MatrixBase<Derived>& rhs) const {
    Matrix z = r_.transpose().template triangularView<Eigen::Lower>().solve(rhs);
    return r_.template triangularView<Eigen::Upper>().solve(z);
  }

  Matrix gram_inverse() const { return solve_gram(Matrix::Identity(dim(), dim())); }

 private:
  Matrix x_;
  std::uint64_t gamma_;
  Matrix r_;
  Matrix q_;
  Matrix gram_;
  Vector colsum_;
};

using Design = DesignMatrix<double>;

/// Design for model `m` over `ds`: a column of ones followed by the selected
/// covariates in increasing index order.
Design design(const Dataset& ds, const ModelIndicator& m);

/// Same, from a bare covariate matrix.
Design design(const Eigen::MatrixXd& X, const ModelIndicator& m);

}  // namespace pcep
