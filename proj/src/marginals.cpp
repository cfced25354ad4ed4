#include "pcep/marginals.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <numbers>

#include "pcep/design.hpp"
#include "pcep/errors.hpp"
#include "pcep/quadrature.hpp"

namespace pcep {

namespace kernels {

double gprior_log_bf(double r2, int k, Eigen::Index n, double g) {
  if (!(g > 0)) throw DomainError("g must be positive");
  if (k > n - 2) throw DimensionError("g-prior needs at least two residual degrees of freedom");
  const double nn = static_cast<double>(n);
  return 0.5 * (nn - 1 - k) * std::log1p(g) - 0.5 * (nn - 1) * std::log1p(g * (1 - r2));
}

namespace {

// Hyper-g integrand after u = g/(1+g):
//   (alpha-2)/2 (1-u)^((k+alpha)/2 - 2) (1 - u R^2)^(-(n-1)/2).
struct HyperGIntegrand {
  double c1, c2, r2, log_const;

  double log_f(double u) const {
    return log_const + c1 * std::log1p(-u) - c2 * std::log1p(-u * r2);
  }

  double mode() const {
    if (c1 <= 0) return 1.0;
    if (!(c2 * r2 > c1)) return 0.0;
    return (c2 * r2 - c1) / (r2 * (c2 - c1));
  }
};

HyperGIntegrand hyperg_integrand(double r2, int k, Eigen::Index n, double alpha) {
  if (!(alpha > 2)) throw DomainError("hyper-g alpha must exceed 2");
  if (k > n - 2) throw DimensionError("hyper-g needs at least two residual degrees of freedom");
  if (!(r2 >= 0 && r2 < 1)) throw DomainError("R^2 must lie in [0, 1)");
  return {0.5 * (k + alpha) - 2, 0.5 * (static_cast<double>(n) - 1), r2,
          std::log(0.5 * (alpha - 2))};
}

// log of the integral of moment(u) * f(u) over (0, 1). The integrand is scaled
// by its peak, and the interval is split at the mode so narrow peaks are seen.
template <typename Moment>
double hyperg_log_integral(const HyperGIntegrand& h, Moment moment) {
  const double mode = h.mode();
  const double peak_u = std::min(mode, 1 - 1e-12);
  const double log_peak = std::max(h.log_f(0.0), h.log_f(peak_u));
  auto scaled = [&](double u) { return moment(u) * std::exp(h.log_f(u) - log_peak); };

  QuadratureOptions opts;
  double total = 0.0;
  bool ok = true;
  auto add = [&](double lo, double hi, double share) {
    if (!(hi > lo)) return;
    QuadratureOptions o = opts;
    o.abs_tol = opts.abs_tol * share;
    const QuadratureResult r = integrate_adaptive(scaled, lo, hi, o);
    ok = ok && r.converged;
    total += r.value;
  };
  if (mode > 0 && mode < 1) {
    add(0.0, mode, 0.5);
    add(mode, 1.0, 0.5);
  } else {
    add(0.0, 1.0, 1.0);
  }
  if (!ok || !(total > 0)) throw NumericError("hyper-g quadrature did not converge");
  return std::log(total) + log_peak;
}

}  // namespace

double hyperg_log_bf(double r2, int k, Eigen::Index n, double alpha) {
  const HyperGIntegrand h = hyperg_integrand(r2, k, n, alpha);
  if (k == 0) return 0.0;
  return hyperg_log_integral(h, [](double) { return 1.0; });
}

double hyperg_shrinkage(double r2, int k, Eigen::Index n, double alpha) {
  const HyperGIntegrand h = hyperg_integrand(r2, k, n, alpha);
  if (k == 0) return 0.0;
  return std::exp(hyperg_log_integral(h, [](double u) { return u; }) -
                  hyperg_log_integral(h, [](double) { return 1.0; }));
}

double bic(double rss, int d, Eigen::Index n) {
  if (!(rss > 0)) throw DegenerateFitError("residual sum of squares is zero; BIC undefined");
  const double nn = static_cast<double>(n);
  return -0.5 * (nn * std::log(rss / nn) + d * std::log(nn));
}

namespace {

struct PcepStats {
  Eigen::LLT<Eigen::MatrixXd> precision;  // V*^-1
  Eigen::LLT<Eigen::MatrixXd> posterior;  // V*^-1 + X'X
  double ss = 0.0;
};

PcepStats pcep_stats(const Eigen::MatrixXd& gram, const Eigen::VectorXd& colsum,
                     const Eigen::VectorXd& xty, double yty, Eigen::Index n,
                     const PcepConfig& cfg) {
  cfg.validate();
  PcepStats s;
  const Eigen::MatrixXd prec = pcep_precision(gram, colsum, n, cfg);
  s.precision.compute(prec);
  if (s.precision.info() != Eigen::Success)
    throw NumericError("PCEP precision is not positive definite");
  s.posterior.compute(prec + gram);
  if (s.posterior.info() != Eigen::Success)
    throw NumericError("PCEP posterior precision is not positive definite");
  const Eigen::VectorXd z = s.posterior.matrixL().solve(xty);
  s.ss = std::max(0.0, yty - z.squaredNorm());
  return s;
}

double log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

double pcep_log_marginal(const Eigen::MatrixXd& gram, const Eigen::VectorXd& colsum,
                         const Eigen::VectorXd& xty, double yty, Eigen::Index n,
                         const PcepConfig& cfg) {
  const PcepStats s = pcep_stats(gram, colsum, xty, yty, n, cfg);
  // |I + X V* X'| = |V*| |V*^-1 + X'X|
  const double log_det_m = log_det(s.posterior) - log_det(s.precision);
  const double nn = static_cast<double>(n);
  return std::lgamma(0.5 * nn + cfg.a) - std::lgamma(cfg.a) -
         0.5 * nn * std::log(2 * std::numbers::pi * cfg.b) - 0.5 * log_det_m -
         (0.5 * nn + cfg.a) * std::log1p(s.ss / (2 * cfg.b));
}

}  // namespace kernels

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double centered_tss(const Eigen::VectorXd& y) { return (y.array() - y.mean()).square().sum(); }

double least_squares_rss(const Design& dm, const Eigen::VectorXd& y) {
  return std::max(0.0, y.squaredNorm() - dm.hat_quadratic(y));
}

// Any model with an intercept fits at least as well as the mean, so a
// negative value is rounding in y'y - |z|^2.
double r_squared(double rss, double tss) { return std::max(0.0, 1 - rss / tss); }

void require_fit(double rss, double tss) {
  if (!(rss > 1e-14 * tss)) throw DegenerateFitError("perfect fit: residual sum of squares is zero");
}

}  // namespace

NigPosterior pcep_posterior(const Dataset& ds, const ModelIndicator& m, const PcepConfig& cfg) {
  const Design dm = design(ds, m);
  detail::require_intercept_span(dm);
  const Eigen::VectorXd xty = dm.full().transpose() * ds.y();
  const auto s = kernels::pcep_stats(dm.gram(), dm.column_sums(), xty, ds.y().squaredNorm(),
                                     ds.n(), cfg);
  NigPosterior out;
  out.sigma_tilde = s.posterior.solve(Eigen::MatrixXd::Identity(dm.dim(), dm.dim()));
  out.sigma_tilde = 0.5 * (out.sigma_tilde + out.sigma_tilde.transpose()).eval();
  out.beta_tilde = s.posterior.solve(xty);
  out.ss = s.ss;
  out.a_tilde = 0.5 * static_cast<double>(ds.n()) + cfg.a;
  out.b_tilde = 0.5 * s.ss + cfg.b;
  return out;
}

double log_marginal_pcep(const Dataset& ds, const ModelIndicator& m, const PcepConfig& cfg) {
  const Design dm = design(ds, m);
  detail::require_intercept_span(dm);
  const Eigen::VectorXd xty = dm.full().transpose() * ds.y();
  return kernels::pcep_log_marginal(dm.gram(), dm.column_sums(), xty, ds.y().squaredNorm(),
                                    ds.n(), cfg);
}

double log_marginal_gprior(const Dataset& ds, const ModelIndicator& m, double g) {
  if (m.size() > ds.n() - 2)
    throw DimensionError("g-prior needs at least two residual degrees of freedom");
  const Design dm = design(ds, m);
  const double r2 = r_squared(least_squares_rss(dm, ds.y()), centered_tss(ds.y()));
  return kernels::gprior_log_bf(r2, m.size(), ds.n(), g);
}

double log_marginal_hyperg(const Dataset& ds, const ModelIndicator& m, double alpha) {
  if (m.size() > ds.n() - 2)
    throw DimensionError("hyper-g needs at least two residual degrees of freedom");
  const Design dm = design(ds, m);
  const double r2 = r_squared(least_squares_rss(dm, ds.y()), centered_tss(ds.y()));
  try {
    return kernels::hyperg_log_bf(r2, m.size(), ds.n(), alpha);
  } catch (const NumericError& e) {
    throw NumericError(e.what(), m.bits());
  }
}

double bic_score(const Dataset& ds, const ModelIndicator& m) {
  const Design dm = design(ds, m);
  const double rss = least_squares_rss(dm, ds.y());
  require_fit(rss, centered_tss(ds.y()));
  return kernels::bic(rss, m.dim(), ds.n());
}

ModelScore score_model(const Dataset& ds, const ModelIndicator& m, const PriorSpec& spec) {
  ModelScorer scorer(ds, spec);
  return {m, scorer.log_marginal(m), backend_name(spec), scorer.r2(m)};
}

ModelScorer::ModelScorer(std::shared_ptr<const ModelSpace> space, Eigen::VectorXd y,
                         PriorSpec spec)
    : space_(std::move(space)), y_(std::move(y)), spec_(std::move(spec)) {
  if (y_.size() != space_->n()) throw DimensionError("response length must match the design");
  validate(spec_);
  xty_ = space_->full_design().transpose() * y_;
  yty_ = y_.squaredNorm();
  tss_ = centered_tss(y_);
  if (!(tss_ > 0)) throw DomainError("response is constant");
}

ModelScorer::ModelScorer(const Dataset& ds, PriorSpec spec)
    : ModelScorer(std::make_shared<const ModelSpace>(ds.X()), ds.y(), std::move(spec)) {}

double ModelScorer::rss_from_factor(const ModelFactor& f) const {
  Eigen::VectorXd b(f.columns.size());
  for (std::size_t i = 0; i < f.columns.size(); ++i) b(i) = xty_(f.columns[i]);
  const Eigen::VectorXd z =
      f.r.transpose().triangularView<Eigen::Lower>().solve(b);
  return std::max(0.0, yty_ - z.squaredNorm());
}

double ModelScorer::rss(const ModelIndicator& m) const {
  const auto f = space_->factor(m);
  if (f->singular) throw SingularityError("rank-deficient design matrix", m.bits());
  return rss_from_factor(*f);
}

double ModelScorer::r2(const ModelIndicator& m) const { return r_squared(rss(m), tss_); }

double ModelScorer::compute(const ModelIndicator& m) const {
  const auto f = space_->factor(m);
  if (f->singular) return -std::numeric_limits<double>::infinity();
  ++evaluations_;
  const Eigen::Index n = space_->n();
  const int k = m.size();
  try {
    return std::visit(
        overloaded{
            [&](const PcepPrior& s) {
              const Eigen::Index d = static_cast<Eigen::Index>(f->columns.size());
              Eigen::MatrixXd gram(d, d);
              Eigen::VectorXd xty(d);
              for (Eigen::Index i = 0; i < d; ++i) {
                xty(i) = xty_(f->columns[i]);
                for (Eigen::Index j = 0; j < d; ++j)
                  gram(i, j) = space_->gram()(f->columns[i], f->columns[j]);
              }
              const Eigen::VectorXd colsum = gram.col(0);
              return kernels::pcep_log_marginal(gram, colsum, xty, yty_, n, s.resolve(n));
            },
            [&](const GPrior& s) {
              return kernels::gprior_log_bf(r_squared(rss_from_factor(*f), tss_), k, n, s.resolve(n));
            },
            [&](const HyperGPrior& s) {
              return kernels::hyperg_log_bf(r_squared(rss_from_factor(*f), tss_), k, n, s.alpha);
            },
            [&](const BicScore&) {
              const double rss = rss_from_factor(*f);
              require_fit(rss, tss_);
              return kernels::bic(rss, m.dim(), n);
            }},
        spec_);
  } catch (const NumericError& e) {
    throw NumericError(e.what(), m.bits());
  }
}

double ModelScorer::log_marginal_or_neg_inf(const ModelIndicator& m, bool* cache_hit) const {
  if (m.p() != p()) throw DimensionError("model indicator p does not match the scorer");
  return cache_.get_or_insert(m.bits(), [&] { return compute(m); }, cache_hit);
}

double ModelScorer::log_marginal(const ModelIndicator& m) const {
  const double v = log_marginal_or_neg_inf(m);
  if (v == -std::numeric_limits<double>::infinity())
    throw SingularityError("rank-deficient design matrix", m.bits());
  return v;
}

}  // namespace pcep
