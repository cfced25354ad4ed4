#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "pcep/design.hpp"
#include "pcep/errors.hpp"

namespace pcep {

template <typename Scalar>
Scalar effective_weight(Scalar g0, Scalar delta) {
  if (!(g0 > 0) || !(delta > 0) || !std::isfinite(g0) || !std::isfinite(delta))
    throw DomainError("g0 and delta must be positive and finite");
  return g0 / (g0 + delta);
}

/// Hyperparameters of the PCEP prior. The imaginary design is the observed
/// design (n* = n), so only its size is recorded.
template <typename Scalar>
struct BasicPcepConfig {
  Scalar g0;
  Scalar delta;
  Scalar a;
  Scalar b;
  Eigen::Index nstar;

  /// delta = n* = n, g0 = n^2, a = b = 0.01.
  static BasicPcepConfig defaults(Eigen::Index n) {
    const Scalar sn = static_cast<Scalar>(n);
    return {sn * sn, sn, Scalar(0.01), Scalar(0.01), n};
  }

  Scalar weight() const { return effective_weight(g0, delta); }

  void validate() const {
    (void)weight();
    if (!(a > 0) || !(b > 0)) throw DomainError("inverse-gamma a and b must be positive");
    if (delta < 1) throw DomainError("power parameter delta must be >= 1");
  }
};

using PcepConfig = BasicPcepConfig<double>;

/// Prior scale V* of the PCEP prior together with its inverse.
template <typename Scalar>
struct PcepScale {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vstar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> precision;
  Scalar log_det;  // log|V*|
};

/// N(mean, scale * sigma^2).
template <typename Scalar>
struct ConditionalGaussian {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mean;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> scale;
};

/// V*^-1 from the model's cross-product and column sums.
///
/// With the intercept in the model, H - H0 is an orthogonal projection P and
/// (delta*Lambda0 + w*H)^-1 = (I + wP)^-1 = I - w/(1+w) P. Substituting gives
///   V*^-1 = [ X'X / (w(1+w)) - w/(1+w) * s s' / n ] / delta,   s = X'1.
template <typename DerivedG, typename DerivedS, typename Scalar>
Eigen::Matrix<typename DerivedG::Scalar, Eigen::Dynamic, Eigen::Dynamic> pcep_precision(
    const Eigen::MatrixBase<DerivedG>& gram, const Eigen::MatrixBase<DerivedS>& colsum,
    Eigen::Index n, const BasicPcepConfig<Scalar>& cfg) {
  using S = typename DerivedG::Scalar;
  const S w = static_cast<S>(cfg.weight());
  const S delta = static_cast<S>(cfg.delta);
  const S c_gram = S(1) / (w * (S(1) + w));
  const S c_mean = w / (S(1) + w) / static_cast<S>(n);
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> prec =
      (c_gram * gram - c_mean * colsum * colsum.transpose()) / delta;
  return S(0.5) * (prec + prec.transpose());
}

namespace detail {

template <typename Scalar>
void require_intercept_span(const DesignMatrix<Scalar>& dm) {
  using Vector = typename DesignMatrix<Scalar>::Vector;
  const Vector ones = Vector::Ones(dm.rows());
  const Scalar miss = (dm.hat(ones) - ones).norm();
  if (!(miss <= Scalar(1e-8) * std::sqrt(static_cast<Scalar>(dm.rows()))))
    throw DomainError("PCEP prior requires the intercept in every model");
}

template <typename Scalar>
Scalar log_inverse_gamma(Scalar x, Scalar a, Scalar b) {
  using std::lgamma;
  using std::log;
  return a * log(b) - lgamma(a) - (a + 1) * log(x) - b / x;
}

}  // namespace detail

/// log f_N(y*; 0, Lambda*^-1 sigma^2) with Lambda*^-1 = delta I + g0 H.
///
/// Lambda*^-1 = delta (I - H) + (delta + g0) H, so its determinant and
/// quadratic form come from y'Hy alone.
template <typename Scalar, typename Derived>
Scalar prior_predictive_logdensity(const Eigen::MatrixBase<Derived>& ystar, Scalar sigma2,
                                   const DesignMatrix<Scalar>& dm,
                                   const BasicPcepConfig<Scalar>& cfg) {
  using std::log;
  cfg.validate();
  if (!(sigma2 > 0)) throw DomainError("sigma2 must be positive");
  if (ystar.size() != dm.rows())
    throw DimensionError("imaginary data length must match the design rows");
  const Scalar n = static_cast<Scalar>(dm.rows());
  const Scalar d = static_cast<Scalar>(dm.dim());
  const Scalar yhy = dm.hat_quadratic(ystar);
  const Scalar yy = ystar.squaredNorm();
  const Scalar log_det = n * log(sigma2) + (n - d) * log(cfg.delta) + d * log(cfg.delta + cfg.g0);
  const Scalar quad = ((yy - yhy) / cfg.delta + yhy / (cfg.delta + cfg.g0)) / sigma2;
  return Scalar(-0.5) * (n * log(Scalar(2) * std::numbers::pi_v<Scalar>) + log_det + quad);
}

/// Posterior of beta under the baseline g-prior and the power likelihood:
/// N(w (X'X)^-1 X'y*, delta w (X'X)^-1 sigma^2).
template <typename Scalar, typename Derived>
ConditionalGaussian<Scalar> baseline_conditional_posterior(const Eigen::MatrixBase<Derived>& ystar,
                                                           Scalar sigma2,
                                                           const DesignMatrix<Scalar>& dm,
                                                           const BasicPcepConfig<Scalar>& cfg) {
  cfg.validate();
  if (!(sigma2 > 0)) throw DomainError("sigma2 must be positive");
  if (ystar.size() != dm.rows())
    throw DimensionError("imaginary data length must match the design rows");
  const Scalar w = cfg.weight();
  ConditionalGaussian<Scalar> out;
  out.mean = w * dm.solve_gram(dm.full().transpose() * ystar);
  out.scale = cfg.delta * w * dm.gram_inverse();
  out.scale = Scalar(0.5) * (out.scale + out.scale.transpose()).eval();
  return out;
}

/// V* = delta {X'[w^-1 I - (delta Lambda0 + w H)^-1] X}^-1, via the
/// projection shortcut in pcep_precision.
template <typename Scalar>
PcepScale<Scalar> pcep_scale(const DesignMatrix<Scalar>& dm, const BasicPcepConfig<Scalar>& cfg) {
  using Matrix = typename DesignMatrix<Scalar>::Matrix;
  cfg.validate();
  detail::require_intercept_span(dm);
  PcepScale<Scalar> out;
  out.precision = pcep_precision(dm.gram(), dm.column_sums(), dm.rows(), cfg);
  Eigen::LLT<Matrix> llt(out.precision);
  if (llt.info() != Eigen::Success)
    throw NumericError("PCEP precision is not positive definite", dm.gamma());
  out.vstar = llt.solve(Matrix::Identity(dm.dim(), dm.dim()));
  out.vstar = Scalar(0.5) * (out.vstar + out.vstar.transpose()).eval();
  Matrix l = llt.matrixL();
  out.log_det = Scalar(-2) * l.diagonal().array().log().sum();
  return out;
}

/// log[f_N(beta; 0, V* sigma^2) f_IG(sigma^2; a, b)].
template <typename Scalar, typename Derived>
Scalar pcep_prior_logdensity(const Eigen::MatrixBase<Derived>& beta, Scalar sigma2,
                             const DesignMatrix<Scalar>& dm, const BasicPcepConfig<Scalar>& cfg) {
  using std::log;
  if (!(sigma2 > 0)) throw DomainError("sigma2 must be positive");
  if (beta.size() != dm.dim()) throw DimensionError("beta length must equal the model dimension");
  const PcepScale<Scalar> scale = pcep_scale(dm, cfg);
  const Scalar d = static_cast<Scalar>(dm.dim());
  const Scalar quad = beta.dot(scale.precision * beta) / sigma2;
  const Scalar log_normal =
      Scalar(-0.5) * (d * log(Scalar(2) * std::numbers::pi_v<Scalar>) + d * log(sigma2) +
                      scale.log_det + quad);
  return log_normal + detail::log_inverse_gamma(sigma2, cfg.a, cfg.b);
}

}  // namespace pcep
