#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "pcep/dataset.hpp"
#include "pcep/design.hpp"
#include "pcep/marginals.hpp"
#include "pcep/model_indicator.hpp"

namespace pcep {

/// n = 50, p = 15: X1..X10 iid N(0,1), X11..X15 ~ N(0.3X1+0.5X2+0.7X3+0.9X4+1.1X5, 1),
/// y ~ N(4 + 2X1 - X5 + 1.5X7 + X11 + 0.5X13, 2.5^2).
Dataset generate_nott_kohn(std::uint64_t seed);
/// Redraws y from the same generating model, keeping X bit-for-bit.
Dataset regenerate_response(const Dataset& ds, std::uint64_t seed);
/// The true model of the Nott-Kohn generator: {X1, X5, X7, X11, X13}.
ModelIndicator nott_kohn_true_model();

/// Two covariates with correlation `cor`; y = 1 + rho X1 + sqrt(1-rho^2) e.
Dataset generate_pairwise(double rho, double cor, Eigen::Index n, std::uint64_t seed);

/// Min, quartiles (R type 7), mean, max and sample SD.
struct SummaryStats {
  double min = 0, q1 = 0, median = 0, mean = 0, q3 = 0, max = 0, sd = 0;
};
SummaryStats summary_stats(std::vector<double> values);

struct BackendReplicates {
  PriorSpec spec;
  std::vector<double> true_model_rank;
  /// n_rep x p inclusion probabilities.
  Eigen::MatrixXd inclusion;
  SummaryStats rank_stats;
  /// Average number of the true non-zero effects with inclusion > 0.5.
  double mean_nonzero_identified = 0;
  /// Average number of true zero effects with inclusion < 0.5.
  double mean_zero_identified = 0;
};

struct ReplicateReport {
  std::uint64_t base_seed = 0;
  int n_rep = 0;
  bool fixed_design = true;
  std::vector<std::string> names;
  ModelIndicator true_model;
  std::vector<BackendReplicates> backends;
};

struct ReplicateOptions {
  bool fixed_design = true;  // draw X once, redraw y per replicate
  unsigned threads = 1;
};

/// Enumerates every replicate under every backend and tabulates the rank of
/// the true model and the inclusion probabilities.
ReplicateReport replicate_study(std::uint64_t base_seed, int n_rep,
                                const std::vector<PriorSpec>& backends,
                                const ReplicateOptions& opts = {});

struct SplitPrediction {
  std::vector<Eigen::Index> validation;
  Eigen::VectorXd observed;
  Eigen::VectorXd predicted;
};

struct RmseReport {
  ModelIndicator gamma;
  std::string backend;
  std::vector<double> rmse;
  std::vector<std::uint64_t> split_streams;
  std::vector<SplitPrediction> predictions;
  double mean = 0;
  double sd = 0;
};

/// Posterior-mean coefficients (intercept first) of model m fitted to ds.
Eigen::VectorXd posterior_mean(const Dataset& ds, const ModelIndicator& m, const PriorSpec& spec);

/// Root mean squared error over `index` of predictions from beta.
double rmse(const Dataset& ds, const ModelIndicator& m, const Eigen::VectorXd& beta,
            const std::vector<Eigen::Index>& index);

/// Repeated random halving: validation size floor((n+1)/2), fit on the rest.
RmseReport split_half_rmse(const Dataset& ds, const ModelIndicator& m, const PriorSpec& spec,
                           int n_splits, std::uint64_t seed);

struct GridAxis {
  double lo = -1;
  double hi = 1;
  int count = 0;
  double at(int i) const { return count == 1 ? lo : lo + (hi - lo) * i / (count - 1); }
};

struct ContourPoint {
  double beta1, beta2, density_pcep, density_gprior;
};

/// Marginal densities of the two slopes at sigma^2 = 1 under PCEP and the
/// g-prior with g = n, over a rectangular grid.
std::vector<ContourPoint> prior_contour_grid(const Design& dm, const PcepConfig& cfg,
                                             const GridAxis& axis1, const GridAxis& axis2);

struct CorrelationCell {
  double rho = 0, cor = 0;
  double mean_pcep = 0, mean_gprior = 0;
  double sd_pcep = 0, sd_gprior = 0;
};

/// Posterior probability of the true model {X1} under PCEP and the g-prior
/// (g = n), averaged over replicates of generate_pairwise.
CorrelationCell correlation_cell(double rho, double cor, Eigen::Index n, int n_rep,
                                 std::uint64_t seed);

}  // namespace pcep
