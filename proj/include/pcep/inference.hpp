#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "pcep/model_indicator.hpp"
#include "pcep/search.hpp"

namespace pcep {

enum class Estimator {
  Renormalized,  // exp(score + log prior) normalised over scored models
  Frequency,     // visit frequencies of the MC3 trace after burn-in
};

struct PosteriorSummary {
  int p = 0;
  std::map<std::uint64_t, double> probs;
  Eigen::VectorXd inclusion;
  ModelIndicator map_model;
  /// Covariates with inclusion strictly above 0.5.
  ModelIndicator mp_model;
  /// Descending probability, ties by increasing bitmask.
  std::vector<std::pair<std::uint64_t, double>> ranking;
};

PosteriorSummary summarize(const ScoreTable& table, const ModelPrior& prior = ModelPrior::uniform(),
                           Estimator estimator = Estimator::Renormalized,
                           double burn_in_fraction = 0.1);

/// exp(score(m1) - score(m2) + log prior(m1) - log prior(m2)).
double posterior_odds(const ScoreTable& table, const ModelIndicator& m1, const ModelIndicator& m2,
                      const ModelPrior& prior = ModelPrior::uniform());

struct Rank {
  std::size_t value = 0;
  /// False for partial (MC3) tables: unscored models could outrank m.
  bool exact = true;
};

/// 1-based rank by posterior probability, ties broken by bitmask order.
Rank rank_of(const ScoreTable& table, const ModelIndicator& m,
             const ModelPrior& prior = ModelPrior::uniform());

}  // namespace pcep
