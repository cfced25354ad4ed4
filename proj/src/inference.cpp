#include "pcep/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcep/errors.hpp"

namespace pcep {

namespace {

std::map<std::uint64_t, double> renormalized(const ScoreTable& table, const ModelPrior& prior) {
  std::map<std::uint64_t, double> logw;
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& [bits, entry] : table.entries) {
    const double w = entry.log_marginal + prior.log_prior(ModelIndicator(bits, table.p));
    logw.emplace_hint(logw.end(), bits, w);
    top = std::max(top, w);
  }
  if (!std::isfinite(top)) throw NumericError("every scored model has zero weight");
  double total = 0.0;
  for (auto& [bits, w] : logw) {
    w = std::exp(w - top);
    total += w;
  }
  for (auto& [bits, w] : logw) w /= total;
  return logw;
}

std::map<std::uint64_t, double> frequencies(const ScoreTable& table, double burn_in_fraction) {
  if (!(burn_in_fraction >= 0 && burn_in_fraction < 1))
    throw UsageError("burn-in fraction must lie in [0, 1)");
  const std::size_t skip =
      static_cast<std::size_t>(std::floor(burn_in_fraction * table.trace.size()));
  if (table.trace.size() <= skip)
    throw UsageError("frequency estimator needs an MC3 trace");
  std::map<std::uint64_t, double> probs;
  for (std::size_t i = skip; i < table.trace.size(); ++i) probs[table.trace[i]] += 1.0;
  const double kept = static_cast<double>(table.trace.size() - skip);
  for (auto& [bits, pr] : probs) pr /= kept;
  return probs;
}

}  // namespace

PosteriorSummary summarize(const ScoreTable& table, const ModelPrior& prior, Estimator estimator,
                           double burn_in_fraction) {
  if (table.entries.empty()) throw UsageError("cannot summarize an empty score table");
  PosteriorSummary out;
  out.p = table.p;
  out.probs = estimator == Estimator::Renormalized ? renormalized(table, prior)
                                                   : frequencies(table, burn_in_fraction);
  out.inclusion = Eigen::VectorXd::Zero(table.p);
  for (const auto& [bits, pr] : out.probs)
    for (int j = 0; j < table.p; ++j)
      if ((bits >> j) & 1u) out.inclusion(j) += pr;

  out.ranking.assign(out.probs.begin(), out.probs.end());
  std::stable_sort(out.ranking.begin(), out.ranking.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  out.map_model = ModelIndicator(out.ranking.front().first, table.p);

  std::uint64_t mp = 0;
  for (int j = 0; j < table.p; ++j)
    if (out.inclusion(j) > 0.5) mp |= std::uint64_t{1} << j;
  out.mp_model = ModelIndicator(mp, table.p);
  return out;
}

double posterior_odds(const ScoreTable& table, const ModelIndicator& m1, const ModelIndicator& m2,
                      const ModelPrior& prior) {
  const double s1 = table.at(m1).log_marginal;
  const double s2 = table.at(m2).log_marginal;
  if (m1 == m2) return 1.0;
  return std::exp((s1 - s2) + (prior.log_prior(m1) - prior.log_prior(m2)));
}

Rank rank_of(const ScoreTable& table, const ModelIndicator& m, const ModelPrior& prior) {
  auto it = table.entries.find(m.bits());
  if (it == table.entries.end()) return {table.entries.size() + 1, false};
  const double target = it->second.log_marginal + prior.log_prior(m);
  std::size_t ahead = 0;
  for (const auto& [bits, entry] : table.entries) {
    if (bits == m.bits()) continue;
    const double w = entry.log_marginal + prior.log_prior(ModelIndicator(bits, table.p));
    if (w > target || (w == target && bits < m.bits())) ++ahead;
  }
  return {ahead + 1, table.exhaustive};
}

}  // namespace pcep
