#pragma once

#include <Eigen/Core>
#include <atomic>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "pcep/dataset.hpp"
#include "pcep/model_indicator.hpp"
#include "pcep/model_space.hpp"
#include "pcep/pcep_core.hpp"

namespace pcep {

/// PCEP prior. Unset g0/delta resolve to n^2 and n of the data being scored.
struct PcepPrior {
  std::optional<double> g0;
  std::optional<double> delta;
  double a = 0.01;
  double b = 0.01;

  PcepConfig resolve(Eigen::Index n) const;
};

/// Zellner g-prior on the slopes, flat on intercept and log sigma. Unset g
/// resolves to n.
struct GPrior {
  std::optional<double> g;
  double resolve(Eigen::Index n) const { return g ? *g : static_cast<double>(n); }
};

/// Mixture of g-priors with pi(g) = (alpha-2)/2 (1+g)^(-alpha/2).
struct HyperGPrior {
  double alpha = 3.0;
};

/// -BIC/2 as a log-evidence surrogate.
struct BicScore {};

using PriorSpec = std::variant<PcepPrior, GPrior, HyperGPrior, BicScore>;

/// Short backend name: "pcep", "gprior", "hyperg", "bic".
std::string backend_name(const PriorSpec& spec);
/// Canonical textual form, e.g. "gprior:g=n" or "pcep:g0=n^2,delta=n,a=0.01,b=0.01".
std::string to_string(const PriorSpec& spec);
/// Inverse of to_string; also accepts bare backend names. Throws UsageError.
PriorSpec parse_prior_spec(std::string_view text);
void validate(const PriorSpec& spec);

/// Normal-inverse-gamma posterior under the PCEP prior.
struct NigPosterior {
  Eigen::VectorXd beta_tilde;
  Eigen::MatrixXd sigma_tilde;  // posterior covariance is sigma_tilde * sigma^2
  double a_tilde = 0.0;
  double b_tilde = 0.0;
  double ss = 0.0;
};

struct ModelScore {
  ModelIndicator gamma;
  double log_marginal = 0.0;
  std::string backend;
  double r2 = 0.0;
};

NigPosterior pcep_posterior(const Dataset& ds, const ModelIndicator& m, const PcepConfig& cfg);

/// log f_St(y; 2a, 0, (b/a)[I + X V* X']), normalised.
double log_marginal_pcep(const Dataset& ds, const ModelIndicator& m, const PcepConfig& cfg);

/// log Bayes factor against the intercept-only model:
///   (n-1-k)/2 log(1+g) - (n-1)/2 log(1 + g(1-R^2)).
double log_marginal_gprior(const Dataset& ds, const ModelIndicator& m, double g);

/// log of the g-prior Bayes factor averaged over the hyper-g prior.
double log_marginal_hyperg(const Dataset& ds, const ModelIndicator& m, double alpha);

/// -BIC/2 with BIC = n log(RSS/n) + d log n.
double bic_score(const Dataset& ds, const ModelIndicator& m);

ModelScore score_model(const Dataset& ds, const ModelIndicator& m, const PriorSpec& spec);

/// Closed forms shared by the per-model functions and ModelScorer.
namespace kernels {

double gprior_log_bf(double r2, int k, Eigen::Index n, double g);
double hyperg_log_bf(double r2, int k, Eigen::Index n, double alpha);
/// E[g/(1+g) | y] under the hyper-g prior (posterior slope shrinkage).
double hyperg_shrinkage(double r2, int k, Eigen::Index n, double alpha);
double bic(double rss, int d, Eigen::Index n);

/// PCEP log marginal from sufficient statistics of one model.
double pcep_log_marginal(const Eigen::MatrixXd& gram, const Eigen::VectorXd& colsum,
                         const Eigen::VectorXd& xty, double yty, Eigen::Index n,
                         const PcepConfig& cfg);

}  // namespace kernels

/// Scores models over a shared ModelSpace for one response and one prior.
/// Results are memoised; concurrent calls are safe.
class ModelScorer {
 public:
  ModelScorer(std::shared_ptr<const ModelSpace> space, Eigen::VectorXd y, PriorSpec spec);
  ModelScorer(const Dataset& ds, PriorSpec spec);

  /// Log marginal (or -BIC/2); throws SingularityError for rank-deficient
  /// models.
  double log_marginal(const ModelIndicator& m) const;
  /// As log_marginal, but -inf for singular models. Reports cache hits.
  double log_marginal_or_neg_inf(const ModelIndicator& m, bool* cache_hit = nullptr) const;

  double r2(const ModelIndicator& m) const;
  double rss(const ModelIndicator& m) const;

  int p() const { return space_->p(); }
  Eigen::Index n() const { return space_->n(); }
  const PriorSpec& spec() const { return spec_; }
  const ModelSpace& space() const { return *space_; }
  std::shared_ptr<const ModelSpace> shared_space() const { return space_; }

  /// Number of uncached score evaluations (each does linear algebra).
  std::size_t evaluations() const { return evaluations_.load(); }

 private:
  double compute(const ModelIndicator& m) const;
  double rss_from_factor(const ModelFactor& f) const;

  std::shared_ptr<const ModelSpace> space_;
  Eigen::VectorXd y_;
  Eigen::VectorXd xty_;  // [1 X]'y
  double yty_ = 0.0;
  double tss_ = 0.0;  // centred total sum of squares
  PriorSpec spec_;
  mutable ConcurrentCache<double> cache_;
  mutable std::atomic<std::size_t> evaluations_{0};
};

}  // namespace pcep
