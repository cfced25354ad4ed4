#include "pcep/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "pcep/errors.hpp"
#include "pcep/random.hpp"

namespace pcep {

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Runs body(i) for i in [0, count) on up to `threads` workers pulling indices
// from a shared counter. The first exception is rethrown after joining.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

ModelPrior ModelPrior::beta_binomial(double alpha, double beta) {
  if (!(alpha > 0) || !(beta > 0)) throw DomainError("beta-binomial parameters must be positive");
  return {Kind::BetaBinomial, alpha, beta};
}

double ModelPrior::log_prior(const ModelIndicator& m) const {
  if (kind == Kind::Uniform) return -m.p() * std::log(2.0);
  const int k = m.size();
  return log_beta(k + alpha, m.p() - k + beta) - log_beta(alpha, beta);
}

const ScoreEntry& ScoreTable::at(const ModelIndicator& m) const {
  auto it = entries.find(m.bits());
  if (it == entries.end()) throw LookupError("model " + std::to_string(m.bits()) + " was not scored");
  return it->second;
}

ScoreTable enumerate(const ModelScorer& scorer, const EnumerateOptions& opts) {
  const int p = scorer.p();
  if (p > kMaxEnumerationCovariates)
    throw CapacityError("enumeration is limited to p <= 22 covariates (p = " + std::to_string(p) +
                        "); use mc3 instead");
  const std::size_t count = std::size_t{1} << p;
  std::vector<double> scores(count);
  // Chunks keep per-task overhead small while still balancing load.
  const std::size_t chunk = 256;
  const std::size_t chunks = (count + chunk - 1) / chunk;
  parallel_for(chunks, opts.threads, [&](std::size_t c) {
    const std::size_t end = std::min(count, (c + 1) * chunk);
    for (std::size_t g = c * chunk; g < end; ++g)
      scores[g] = scorer.log_marginal_or_neg_inf(ModelIndicator(g, p));
  });

  ScoreTable table;
  table.p = p;
  table.spec = scorer.spec();
  table.exhaustive = true;
  for (std::size_t g = 0; g < count; ++g) {
    table.entries.emplace_hint(table.entries.end(), g, ScoreEntry{scores[g], 0, 0});
    if (scores[g] == kNegInf) ++table.singular;
  }
  return table;
}

ScoreTable enumerate(const Dataset& ds, const PriorSpec& spec, const EnumerateOptions& opts) {
  if (ds.p() > kMaxEnumerationCovariates)
    throw CapacityError("enumeration is limited to p <= 22 covariates (p = " +
                        std::to_string(ds.p()) + "); use mc3 instead");
  return enumerate(ModelScorer(ds, spec), opts);
}

double log_acceptance(double log_marginal_current, double log_marginal_proposed,
                      double log_prior_current, double log_prior_proposed) {
  if (log_marginal_proposed == kNegInf) return kNegInf;
  const double delta =
      (log_marginal_proposed - log_marginal_current) + (log_prior_proposed - log_prior_current);
  return std::min(0.0, delta);
}

ScoreTable mc3(const ModelScorer& scorer, const ModelPrior& prior, std::uint64_t iters,
               std::uint64_t seed, const Mc3Options& opts) {
  if (iters < 1) throw UsageError("mc3 needs at least one iteration");
  const int p = scorer.p();
  ModelIndicator state = opts.start.p() == p ? opts.start : ModelIndicator::null_model(p);

  ScoreTable table;
  table.p = p;
  table.spec = scorer.spec();
  table.trace.reserve(iters);

  std::uint64_t lookups = 0;
  std::uint64_t hits = 0;
  auto score = [&](const ModelIndicator& m) {
    bool hit = false;
    const double v = scorer.log_marginal_or_neg_inf(m, &hit);
    ++lookups;
    hits += hit;
    auto [it, inserted] = table.entries.try_emplace(m.bits(), ScoreEntry{v, 0, 0});
    if (inserted && v == kNegInf) ++table.singular;
    return std::pair{v, &it->second};
  };

  auto [current, current_entry] = score(state);
  (void)current_entry;
  if (current == kNegInf) throw SingularityError("mc3 start model is singular", state.bits());
  double current_prior = prior.log_prior(state);

  Philox rng(seed);
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  for (std::uint64_t it = 1; it <= iters; ++it) {
    rng.shuffle(std::span<int>(order));
    for (int j : order) {
      const ModelIndicator proposal = state.flipped(j);
      auto [proposed, entry] = score(proposal);
      ++entry->proposals;
      const double proposed_prior = prior.log_prior(proposal);
      const double log_alpha = log_acceptance(current, proposed, current_prior, proposed_prior);
      if (log_alpha == 0.0 || std::log(rng.uniform()) < log_alpha) {
        state = proposal;
        current = proposed;
        current_prior = proposed_prior;
      }
    }
    ++table.entries.at(state.bits()).visits;
    table.trace.push_back(state.bits());
    if (opts.progress && (it % opts.progress_every == 0 || it == iters))
      opts.progress({it, iters, lookups ? static_cast<double>(hits) / lookups : 0.0});
  }
  return table;
}

ScoreTable mc3(const Dataset& ds, const PriorSpec& spec, const ModelPrior& prior,
               std::uint64_t iters, std::uint64_t seed, const Mc3Options& opts) {
  return mc3(ModelScorer(ds, spec), prior, iters, seed, opts);
}

std::vector<ScoreTable> mc3_chains(const ModelScorer& scorer, const ModelPrior& prior,
                                   std::uint64_t iters, const std::vector<std::uint64_t>& seeds,
                                   unsigned threads) {
  std::vector<ScoreTable> out(seeds.size());
  parallel_for(seeds.size(), threads,
               [&](std::size_t i) { out[i] = mc3(scorer, prior, iters, seeds[i]); });
  return out;
}

}  // namespace pcep
