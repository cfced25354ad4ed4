#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "pcep/dataset.hpp"
#include "pcep/marginals.hpp"
#include "pcep/model_indicator.hpp"

namespace pcep {

/// Prior over the 2^p models.
struct ModelPrior {
  enum class Kind { Uniform, BetaBinomial };
  Kind kind = Kind::Uniform;
  double alpha = 1.0;
  double beta = 1.0;

  static ModelPrior uniform() { return {}; }
  static ModelPrior beta_binomial(double alpha, double beta);

  double log_prior(const ModelIndicator& m) const;
};

struct ScoreEntry {
  double log_marginal = 0.0;
  std::uint64_t visits = 0;
  std::uint64_t proposals = 0;
};

/// Scored models keyed by bitmask.
struct ScoreTable {
  int p = 0;
  PriorSpec spec;
  bool exhaustive = false;
  std::map<std::uint64_t, ScoreEntry> entries;
  /// MC3 only: the state after each sweep.
  std::vector<std::uint64_t> trace;
  /// Models whose design was rank-deficient (scored -inf).
  std::size_t singular = 0;

  bool contains(const ModelIndicator& m) const { return entries.count(m.bits()) != 0; }
  /// Throws LookupError for unscored models.
  const ScoreEntry& at(const ModelIndicator& m) const;
};

inline constexpr int kMaxEnumerationCovariates = 22;

struct Progress {
  std::uint64_t iteration = 0;
  std::uint64_t total = 0;
  double cache_hit_rate = 0.0;
};
using ProgressCallback = std::function<void(const Progress&)>;

struct EnumerateOptions {
  unsigned threads = 1;
};

/// Scores all 2^p models. Deterministic regardless of thread count.
ScoreTable enumerate(const ModelScorer& scorer, const EnumerateOptions& opts = {});
ScoreTable enumerate(const Dataset& ds, const PriorSpec& spec, const EnumerateOptions& opts = {});

struct Mc3Options {
  ModelIndicator start;  // defaults to the null model when p() == 0
  ProgressCallback progress;
  std::uint64_t progress_every = 1000;
};

/// MC3 Metropolis-within-Gibbs: each iteration sweeps the p indicators in a
/// freshly shuffled order, proposing a single-bit flip and accepting it with
/// probability min(1, exp(delta log marginal + delta log prior)).
ScoreTable mc3(const ModelScorer& scorer, const ModelPrior& prior, std::uint64_t iters,
               std::uint64_t seed, const Mc3Options& opts = {});
ScoreTable mc3(const Dataset& ds, const PriorSpec& spec, const ModelPrior& prior,
               std::uint64_t iters, std::uint64_t seed, const Mc3Options& opts = {});

/// Independent chains sharing one scorer (and so one score cache), one per
/// seed, run on up to `threads` workers.
std::vector<ScoreTable> mc3_chains(const ModelScorer& scorer, const ModelPrior& prior,
                                   std::uint64_t iters, const std::vector<std::uint64_t>& seeds,
                                   unsigned threads);

/// log of the Metropolis acceptance probability for a proposed move.
double log_acceptance(double log_marginal_current, double log_marginal_proposed,
                      double log_prior_current, double log_prior_proposed);

}  // namespace pcep
