#include "pcep/model_space.hpp"

#include <cstring>

#include "pcep/design.hpp"
#include "pcep/errors.hpp"

namespace pcep {

namespace {

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& X, const ModelIndicator& m) {
  if (m.p() != X.cols()) throw DimensionError("model indicator p does not match the design");
  Eigen::MatrixXd out(X.rows(), m.dim());
  out.col(0).setOnes();
  int c = 1;
  for (int j : m.covariates()) out.col(c++) = X.col(j);
  return out;
}

// FNV-1a over the raw bytes of the matrix and its shape.
std::uint64_t fingerprint_of(const Eigen::MatrixXd& X) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const Eigen::Index shape[2] = {X.rows(), X.cols()};
  feed(shape, sizeof shape);
  feed(X.data(), sizeof(double) * X.size());
  return h;
}

}  // namespace

Design design(const Eigen::MatrixXd& X, const ModelIndicator& m) {
  return Design(with_intercept(X, m), m.bits());
}

Design design(const Dataset& ds, const ModelIndicator& m) { return design(ds.X(), m); }

ModelSpace::ModelSpace(const Eigen::MatrixXd& X) {
  if (X.cols() > ModelIndicator::kMaxCovariates)
    throw CapacityError("at most 64 candidate covariates are supported");
  full_.resize(X.rows(), X.cols() + 1);
  full_.col(0).setOnes();
  full_.rightCols(X.cols()) = X;
  gram_ = full_.transpose() * full_;
  gram_ = 0.5 * (gram_ + gram_.transpose()).eval();
  fingerprint_ = fingerprint_of(X);
}

std::shared_ptr<const ModelFactor> ModelSpace::factor(const ModelIndicator& m) const {
  if (m.p() != p()) throw DimensionError("model indicator p does not match the model space");
  return cache_.get_or_insert(m.bits(), [&] { return compute(m); });
}

std::shared_ptr<const ModelFactor> ModelSpace::compute(const ModelIndicator& m) const {
  ++factorizations_;
  auto f = std::make_shared<ModelFactor>();
  f->columns.push_back(0);
  for (int j : m.covariates()) f->columns.push_back(j + 1);
  const Eigen::Index d = static_cast<Eigen::Index>(f->columns.size());
  if (d > n()) {
    f->singular = true;
    return f;
  }
  Eigen::MatrixXd xm(n(), d);
  for (Eigen::Index c = 0; c < d; ++c) xm.col(c) = full_.col(f->columns[c]);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(xm);
  f->r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  const Eigen::VectorXd diag = f->r.diagonal().cwiseAbs();
  if (diag.minCoeff() <= kRankTolerance * diag.maxCoeff()) {
    f->singular = true;
    return f;
  }
  f->log_det_gram = 2.0 * diag.array().log().sum();
  return f;
}

}  // namespace pcep
