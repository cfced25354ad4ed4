#include "pcep/eval.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <atomic>
#include <mutex>
#include <thread>

#include "pcep/errors.hpp"
#include "pcep/inference.hpp"
#include "pcep/random.hpp"
#include "pcep/search.hpp"

namespace pcep {

namespace {

constexpr int kNottKohnP = 15;

std::vector<std::string> x_names(int p) {
  std::vector<std::string> names;
  for (int j = 1; j <= p; ++j) names.push_back("X" + std::to_string(j));
  return names;
}

template <typename Body>
void for_each_index(std::size_t count, unsigned threads, Body body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  std::vector<std::thread> pool;
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
  if (threads == 1) {
    worker();
  } else {
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (v.size() - 1));
}

double quantile7(const std::vector<double>& sorted, double q) {
  const double h = (sorted.size() - 1) * q;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

double bivariate_normal_density(double x1, double x2, const Eigen::Matrix2d& cov) {
  const Eigen::Vector2d x(x1, x2);
  const double quad = x.dot(cov.ldlt().solve(x));
  return std::exp(-0.5 * quad) / (2 * std::numbers::pi * std::sqrt(cov.determinant()));
}

}  // namespace

Dataset regenerate_response(const Dataset& ds, std::uint64_t seed) {
  if (ds.p() != kNottKohnP) throw UsageError("Nott-Kohn response needs the 15 generator covariates");
  const Eigen::MatrixXd& X = ds.X();
  Philox rng(seed, 1);
  Eigen::VectorXd y(ds.n());
  for (Eigen::Index i = 0; i < ds.n(); ++i)
    y(i) = 4 + 2 * X(i, 0) - X(i, 4) + 1.5 * X(i, 6) + X(i, 10) + 0.5 * X(i, 12) + 2.5 * rng.normal();
  return ds.with_response(std::move(y));
}

Dataset generate_nott_kohn(std::uint64_t seed) {
  const Eigen::Index n = 50;
  Philox rng(seed, 0);
  Eigen::MatrixXd X(n, kNottKohnP);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < 10; ++j) X(i, j) = rng.normal();
    const double mean = 0.3 * X(i, 0) + 0.5 * X(i, 1) + 0.7 * X(i, 2) + 0.9 * X(i, 3) + 1.1 * X(i, 4);
    for (int j = 10; j < kNottKohnP; ++j) X(i, j) = mean + rng.normal();
  }
  Dataset placeholder(Eigen::VectorXd::LinSpaced(n, 0, 1), std::move(X), x_names(kNottKohnP));
  return regenerate_response(placeholder, seed);
}

ModelIndicator nott_kohn_true_model() {
  return ModelIndicator::from_one_based({1, 5, 7, 11, 13}, kNottKohnP);
}

Dataset generate_pairwise(double rho, double cor, Eigen::Index n, std::uint64_t seed) {
  if (!(std::abs(cor) < 1)) throw DomainError("covariate correlation must lie in (-1, 1)");
  if (!(std::abs(rho) <= 1)) throw DomainError("rho must lie in [-1, 1]");
  if (n < 3) throw DimensionError("need at least 3 observations");
  Philox rng(seed);
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  const double s_cor = std::sqrt(1 - cor * cor);
  const double s_rho = std::sqrt(1 - rho * rho);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = rng.normal();
    X(i, 1) = cor * X(i, 0) + s_cor * rng.normal();
    y(i) = 1 + rho * X(i, 0) + s_rho * rng.normal();
  }
  return Dataset(std::move(y), std::move(X), {"X1", "X2"});
}

SummaryStats summary_stats(std::vector<double> values) {
  if (values.empty()) throw UsageError("summary of an empty sample");
  std::sort(values.begin(), values.end());
  SummaryStats s;
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile7(values, 0.25);
  s.median = quantile7(values, 0.5);
  s.q3 = quantile7(values, 0.75);
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  s.sd = sample_sd(values);
  return s;
}

ReplicateReport replicate_study(std::uint64_t base_seed, int n_rep,
                                const std::vector<PriorSpec>& backends,
                                const ReplicateOptions& opts) {
  if (n_rep < 2) throw UsageError("replicate study needs at least 2 replicates");
  if (backends.empty()) throw UsageError("replicate study needs at least one backend");

  ReplicateReport report;
  report.base_seed = base_seed;
  report.n_rep = n_rep;
  report.fixed_design = opts.fixed_design;
  report.names = x_names(kNottKohnP);
  report.true_model = nott_kohn_true_model();

  const std::size_t nb = backends.size();
  std::vector<std::vector<double>> ranks(nb, std::vector<double>(n_rep));
  std::vector<Eigen::MatrixXd> inclusion(nb, Eigen::MatrixXd(n_rep, kNottKohnP));

  std::shared_ptr<const ModelSpace> shared;
  Dataset base = generate_nott_kohn(base_seed);
  if (opts.fixed_design) shared = std::make_shared<const ModelSpace>(centered(base).X());

  for_each_index(n_rep, opts.threads, [&](std::size_t r) {
    const std::uint64_t seed = derive_seed(base_seed, r);
    const Dataset ds = centered(opts.fixed_design ? regenerate_response(base, seed)
                                                  : generate_nott_kohn(seed));
    auto space = opts.fixed_design ? shared : std::make_shared<const ModelSpace>(ds.X());
    for (std::size_t b = 0; b < nb; ++b) {
      const ModelScorer scorer(space, ds.y(), backends[b]);
      const ScoreTable table = enumerate(scorer);
      const PosteriorSummary summary = summarize(table);
      ranks[b][r] = static_cast<double>(rank_of(table, report.true_model).value);
      inclusion[b].row(r) = summary.inclusion.transpose();
    }
  });

  for (std::size_t b = 0; b < nb; ++b) {
    BackendReplicates out;
    out.spec = backends[b];
    out.true_model_rank = ranks[b];
    out.inclusion = inclusion[b];
    out.rank_stats = summary_stats(ranks[b]);
    double nonzero = 0, zero = 0;
    for (int r = 0; r < n_rep; ++r)
      for (int j = 0; j < kNottKohnP; ++j) {
        const double pr = inclusion[b](r, j);
        if (report.true_model.includes(j))
          nonzero += pr > 0.5;
        else
          zero += pr < 0.5;
      }
    out.mean_nonzero_identified = nonzero / n_rep;
    out.mean_zero_identified = zero / n_rep;
    report.backends.push_back(std::move(out));
  }
  return report;
}

Eigen::VectorXd posterior_mean(const Dataset& ds, const ModelIndicator& m, const PriorSpec& spec) {
  if (const auto* s = std::get_if<PcepPrior>(&spec))
    return pcep_posterior(ds, m, s->resolve(ds.n())).beta_tilde;

  const Design dm = design(ds, m);
  Eigen::VectorXd beta = dm.solve_gram(dm.full().transpose() * ds.y());
  if (m.size() == 0 || std::holds_alternative<BicScore>(spec)) return beta;

  double shrink = 1.0;
  if (const auto* s = std::get_if<GPrior>(&spec)) {
    const double g = s->resolve(ds.n());
    shrink = g / (1 + g);
  } else if (const auto* s = std::get_if<HyperGPrior>(&spec)) {
    const double tss = (ds.y().array() - ds.y().mean()).square().sum();
    const double rss = std::max(0.0, ds.y().squaredNorm() - dm.hat_quadratic(ds.y()));
    shrink = kernels::hyperg_shrinkage(std::max(0.0, 1 - rss / tss), m.size(), ds.n(), s->alpha);
  }
  // Shrink the slopes towards zero; the intercept keeps the fit through the means.
  Eigen::VectorXd xbar(m.size());
  int c = 0;
  for (int j : m.covariates()) xbar(c++) = ds.X().col(j).mean();
  beta.tail(m.size()) *= shrink;
  beta(0) = ds.y().mean() - xbar.dot(beta.tail(m.size()));
  return beta;
}

double rmse(const Dataset& ds, const ModelIndicator& m, const Eigen::VectorXd& beta,
            const std::vector<Eigen::Index>& index) {
  if (index.empty()) throw UsageError("RMSE over an empty index set");
  if (beta.size() != m.dim()) throw DimensionError("coefficient length must equal the model dimension");
  const std::vector<int> cols = m.covariates();
  double ss = 0.0;
  for (Eigen::Index i : index) {
    double pred = beta(0);
    for (std::size_t c = 0; c < cols.size(); ++c) pred += beta(c + 1) * ds.X()(i, cols[c]);
    ss += (ds.y()(i) - pred) * (ds.y()(i) - pred);
  }
  return std::sqrt(ss / index.size());
}

RmseReport split_half_rmse(const Dataset& ds, const ModelIndicator& m, const PriorSpec& spec,
                           int n_splits, std::uint64_t seed) {
  if (n_splits < 1) throw UsageError("need at least one split");
  if (ds.n() < 2 * m.dim()) throw DimensionError("too few observations for split-half fitting");
  const Eigen::Index n = ds.n();
  const Eigen::Index n_v = (n + 1) / 2;

  RmseReport report;
  report.gamma = m;
  report.backend = backend_name(spec);
  for (int s = 0; s < n_splits; ++s) {
    std::uint64_t stream = static_cast<std::uint64_t>(s);
    for (int attempt = 0;; ++attempt) {
      Philox rng(seed, stream);
      std::vector<Eigen::Index> perm(n);
      std::iota(perm.begin(), perm.end(), Eigen::Index{0});
      rng.shuffle(std::span<Eigen::Index>(perm));
      std::vector<Eigen::Index> validation(perm.begin(), perm.begin() + n_v);
      std::vector<Eigen::Index> training(perm.begin() + n_v, perm.end());
      std::sort(validation.begin(), validation.end());
      std::sort(training.begin(), training.end());
      try {
        const Eigen::VectorXd beta = posterior_mean(ds.rows(training), m, spec);
        SplitPrediction pred;
        pred.validation = validation;
        pred.observed.resize(n_v);
        pred.predicted.resize(n_v);
        const std::vector<int> cols = m.covariates();
        for (Eigen::Index i = 0; i < n_v; ++i) {
          const Eigen::Index row = validation[i];
          pred.observed(i) = ds.y()(row);
          double yhat = beta(0);
          for (std::size_t c = 0; c < cols.size(); ++c) yhat += beta(c + 1) * ds.X()(row, cols[c]);
          pred.predicted(i) = yhat;
        }
        report.rmse.push_back(rmse(ds, m, beta, validation));
        report.predictions.push_back(std::move(pred));
        report.split_streams.push_back(stream);
        break;
      } catch (const SingularityError&) {
        if (attempt > 0) throw;
      } catch (const SchemaError&) {
        // A covariate is constant on the training rows.
        if (attempt > 0) throw SingularityError("training design is singular", m.bits());
      }
      stream += static_cast<std::uint64_t>(n_splits);
    }
  }
  report.mean = std::accumulate(report.rmse.begin(), report.rmse.end(), 0.0) / n_splits;
  report.sd = sample_sd(report.rmse);
  return report;
}

std::vector<ContourPoint> prior_contour_grid(const Design& dm, const PcepConfig& cfg,
                                             const GridAxis& axis1, const GridAxis& axis2) {
  if (dm.dim() != 3) throw DimensionError("contour grid needs exactly two covariates");
  if (axis1.count < 1 || axis2.count < 1) throw UsageError("contour grid is empty");
  const PcepScale<double> scale = pcep_scale(dm, cfg);
  const Eigen::Matrix2d cov_pcep = scale.vstar.bottomRightCorner<2, 2>();
  const double g = static_cast<double>(dm.rows());
  const Eigen::Matrix2d cov_g = g * dm.gram_inverse().bottomRightCorner<2, 2>();

  std::vector<ContourPoint> out;
  out.reserve(static_cast<std::size_t>(axis1.count) * axis2.count);
  for (int i = 0; i < axis1.count; ++i)
    for (int j = 0; j < axis2.count; ++j) {
      const double b1 = axis1.at(i), b2 = axis2.at(j);
      out.push_back({b1, b2, bivariate_normal_density(b1, b2, cov_pcep),
                     bivariate_normal_density(b1, b2, cov_g)});
    }
  return out;
}

CorrelationCell correlation_cell(double rho, double cor, Eigen::Index n, int n_rep,
                                 std::uint64_t seed) {
  if (n_rep < 1) throw UsageError("need at least one replicate");
  const ModelIndicator truth(1, 2);
  std::vector<double> pcep_probs, g_probs;
  for (int r = 0; r < n_rep; ++r) {
    const Dataset ds = centered(generate_pairwise(rho, cor, n, derive_seed(seed, r)));
    auto space = std::make_shared<const ModelSpace>(ds.X());
    for (auto [spec, sink] : {std::pair<PriorSpec, std::vector<double>*>{PcepPrior{}, &pcep_probs},
                              std::pair<PriorSpec, std::vector<double>*>{GPrior{}, &g_probs}}) {
      const ModelScorer scorer(space, ds.y(), spec);
      sink->push_back(summarize(enumerate(scorer)).probs.at(truth.bits()));
    }
  }
  CorrelationCell cell;
  cell.rho = rho;
  cell.cor = cor;
  cell.mean_pcep = std::accumulate(pcep_probs.begin(), pcep_probs.end(), 0.0) / n_rep;
  cell.mean_gprior = std::accumulate(g_probs.begin(), g_probs.end(), 0.0) / n_rep;
  cell.sd_pcep = sample_sd(pcep_probs);
  cell.sd_gprior = sample_sd(g_probs);
  return cell;
}

}  // namespace pcep
