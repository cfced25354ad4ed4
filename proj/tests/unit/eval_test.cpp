#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "oracles.hpp"
#include "pcep/errors.hpp"
#include "pcep/eval.hpp"
#include "pcep/inference.hpp"
#include "pcep/random.hpp"

using namespace pcep;

namespace {

double correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ca = a.array() - a.mean(), cb = b.array() - b.mean();
  return ca.dot(cb) / std::sqrt(ca.squaredNorm() * cb.squaredNorm());
}

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd Xl(X.rows(), X.cols() + 1);
  Xl << Eigen::VectorXd::Ones(X.rows()), X;
  return Xl;
}

}  // namespace

TEST(NottKohn, ShapeAndDeterminism) {
  const Dataset a = generate_nott_kohn(5), b = generate_nott_kohn(5), c = generate_nott_kohn(6);
  EXPECT_EQ(a.n(), 50);
  EXPECT_EQ(a.p(), 15);
  EXPECT_EQ(a.names().front(), "X1");
  EXPECT_EQ(a.names().back(), "X15");
  EXPECT_EQ(a.X(), b.X());
  EXPECT_EQ(a.y(), b.y());
  EXPECT_NE(a.X(), c.X());
  EXPECT_EQ(nott_kohn_true_model(), ModelIndicator::from_one_based({1, 5, 7, 11, 13}, 15));
}

TEST(NottKohn, CovariateDependence) {
  const double expected = 0.3 / std::sqrt(1 + 0.09 + 0.25 + 0.49 + 0.81 + 1.21);
  double total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Dataset ds = generate_nott_kohn(seed);
    total += correlation(ds.X().col(10), ds.X().col(0));
  }
  EXPECT_GT(total / 200, 0.0);
  EXPECT_NEAR(total / 200, expected, 0.15);
}

TEST(NottKohn, OlsRecoversCoefficients) {
  const Eigen::Vector<double, 5> truth(2, -1, 1.5, 1, 0.5);
  const ModelIndicator m = nott_kohn_true_model();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(6);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Dataset ds = generate_nott_kohn(seed);
    Eigen::MatrixXd X(50, 5);
    int c = 0;
    for (int j : m.covariates()) X.col(c++) = ds.X().col(j);
    const Eigen::MatrixXd Xl = with_intercept(X);
    mean += (Xl.transpose() * Xl).ldlt().solve(Xl.transpose() * ds.y()) / 200;
  }
  EXPECT_NEAR(mean(0), 4.0, 0.3);
  for (int j = 0; j < 5; ++j) EXPECT_NEAR(mean(j + 1), truth(j), 0.15) << j;
}

TEST(NottKohn, RegenerateKeepsDesign) {
  const Dataset base = generate_nott_kohn(1);
  const Dataset a = regenerate_response(base, 10), b = regenerate_response(base, 11);
  EXPECT_EQ(a.X(), base.X());
  EXPECT_NE(a.y(), b.y());
  EXPECT_EQ(a.y(), regenerate_response(base, 10).y());
  for (std::uint64_t s = 0; s < 50; ++s) EXPECT_NEAR(regenerate_response(base, s).y().mean(), 4.0, 1.5);
  const Dataset wrong = generate_pairwise(0.5, 0.2, 50, 1);
  EXPECT_THROW(regenerate_response(wrong, 1), UsageError);
}

TEST(Pairwise, IndependentCovariates) {
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset ds = generate_pairwise(0.4, 0.0, 100, seed);
    worst = std::max(worst, std::abs(correlation(ds.X().col(0), ds.X().col(1))));
  }
  EXPECT_LT(worst, 0.3);
  EXPECT_NEAR(std::abs(correlation(generate_pairwise(0.4, 0.0, 100, 3).X().col(0),
                                   generate_pairwise(0.4, 0.0, 100, 3).X().col(1))),
              0.0, 0.1);
}

TEST(Pairwise, PopulationMoments) {
  const Dataset ds = generate_pairwise(0.5, 0.7, 200000, 9);
  EXPECT_NEAR(correlation(ds.X().col(0), ds.X().col(1)), 0.7, 0.01);
  const Eigen::VectorXd yc = ds.y().array() - ds.y().mean();
  EXPECT_NEAR(yc.squaredNorm() / (ds.n() - 1), 1.0, 0.02);
  EXPECT_NEAR(ds.y().mean(), 1.0, 0.01);
  EXPECT_THROW(generate_pairwise(0.5, 1.0, 100, 1), DomainError);
}

TEST(SummaryStats, RType7Quartiles) {
  std::vector<double> v(10);
  std::iota(v.begin(), v.end(), 1.0);
  std::shuffle(v.begin(), v.end(), std::mt19937_64(1));
  const SummaryStats s = summary_stats(v);
  EXPECT_DOUBLE_EQ(s.min, 1);
  EXPECT_DOUBLE_EQ(s.q1, 3.25);
  EXPECT_DOUBLE_EQ(s.median, 5.5);
  EXPECT_DOUBLE_EQ(s.mean, 5.5);
  EXPECT_DOUBLE_EQ(s.q3, 7.75);
  EXPECT_DOUBLE_EQ(s.max, 10);
  EXPECT_NEAR(s.sd, 3.0276503540974917, 1e-12);
  EXPECT_THROW(summary_stats({}), UsageError);
}

TEST(ReplicateStudy, SmokeRunInvariants) {
  const std::vector<PriorSpec> backends{PcepPrior{}, GPrior{}, HyperGPrior{}};
  const ReplicateReport r = replicate_study(3, 2, backends, {.threads = 2});
  EXPECT_EQ(r.n_rep, 2);
  ASSERT_EQ(r.backends.size(), 3u);
  for (const auto& b : r.backends) {
    ASSERT_EQ(b.true_model_rank.size(), 2u);
    for (double rank : b.true_model_rank) {
      EXPECT_GE(rank, 1);
      EXPECT_LE(rank, 32768);
    }
    EXPECT_EQ(b.inclusion.rows(), 2);
    EXPECT_EQ(b.inclusion.cols(), 15);
    EXPECT_GE(b.inclusion.minCoeff(), 0.0);
    EXPECT_LE(b.inclusion.maxCoeff(), 1.0);
    const SummaryStats& s = b.rank_stats;
    EXPECT_LE(s.min, s.q1);
    EXPECT_LE(s.q1, s.median);
    EXPECT_LE(s.median, s.q3);
    EXPECT_LE(s.q3, s.max);
    EXPECT_GE(s.mean, s.min);
    EXPECT_LE(s.mean, s.max);
    const SummaryStats again = summary_stats(b.true_model_rank);
    EXPECT_DOUBLE_EQ(again.mean, s.mean);
    EXPECT_DOUBLE_EQ(again.sd, s.sd);
    EXPECT_GE(b.mean_nonzero_identified, 0);
    EXPECT_LE(b.mean_nonzero_identified, 5);
    EXPECT_LE(b.mean_zero_identified, 10);
  }
  EXPECT_THROW(replicate_study(3, 1, backends), UsageError);
}

TEST(ReplicateStudy, MatchesManualReplicate) {
  const ReplicateReport r = replicate_study(8, 3, {GPrior{}}, {.threads = 3});
  const Dataset base = generate_nott_kohn(8);
  for (int rep = 0; rep < 3; ++rep) {
    const Dataset ds = centered(regenerate_response(base, derive_seed(8, rep)));
    const ScoreTable table = enumerate(ds, GPrior{});
    const PosteriorSummary s = summarize(table);
    EXPECT_EQ(r.backends[0].true_model_rank[rep], rank_of(table, nott_kohn_true_model()).value);
    EXPECT_LT((r.backends[0].inclusion.row(rep).transpose() - s.inclusion).cwiseAbs().maxCoeff(), 1e-12);
  }
  const ReplicateReport again = replicate_study(8, 3, {GPrior{}}, {.threads = 1});
  EXPECT_EQ(r.backends[0].true_model_rank, again.backends[0].true_model_rank);
}

TEST(ReplicateStudy, RandomDesignRedrawsCovariates) {
  const ReplicateReport fixed = replicate_study(2, 2, {BicScore{}});
  const ReplicateReport random = replicate_study(2, 2, {BicScore{}}, {.fixed_design = false});
  EXPECT_FALSE(random.fixed_design);
  EXPECT_NE(fixed.backends[0].inclusion, random.backends[0].inclusion);
}

TEST(PosteriorMean, BackendsAgainstDirectFormulas) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd Xl = oracle::random_design(rng, 30, 3);
  Eigen::VectorXd y = 2 + 0.8 * Xl.col(1).array() - 0.4 * Xl.col(3).array();
  y += oracle::random_vector(rng, 30);
  Eigen::MatrixXd X = Xl.rightCols(3);
  X.col(0).array() += 1.5;  // uncentred columns exercise the intercept correction
  const Dataset ds(y, X, {"a", "b", "c"});
  const Eigen::MatrixXd D = with_intercept(X);
  const ModelIndicator m = ModelIndicator::full_model(3);
  const Eigen::VectorXd ols = (D.transpose() * D).ldlt().solve(D.transpose() * y);

  EXPECT_LT((posterior_mean(ds, m, BicScore{}) - ols).norm(), 1e-10);

  const Eigen::VectorXd g = posterior_mean(ds, m, GPrior{});
  EXPECT_LT((g.tail(3) - ols.tail(3) * 30.0 / 31.0).norm(), 1e-10);
  EXPECT_NEAR(g(0), y.mean() - X.colwise().mean().dot(g.tail(3)), 1e-10);

  const double r2 = oracle::r_squared(D, y);
  const double u = kernels::hyperg_shrinkage(r2, 3, 30, 3.0);
  EXPECT_LT((posterior_mean(ds, m, HyperGPrior{}).tail(3) - ols.tail(3) * u).norm(), 1e-8);

  const PcepConfig cfg = PcepConfig::defaults(30);
  const Eigen::MatrixXd vinv = oracle::dense_vstar(D, cfg.g0, cfg.delta).inverse();
  const Eigen::VectorXd pcep = (vinv + D.transpose() * D).ldlt().solve(D.transpose() * y);
  EXPECT_LT((posterior_mean(ds, m, PcepPrior{}) - pcep).norm(), 1e-8);
}

TEST(SplitHalfRmse, NoiselessDataPredictsExactly) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd Xl = oracle::random_design(rng, 21, 2);
  const Eigen::VectorXd y = 1 + 2 * Xl.col(1).array() - Xl.col(2).array();
  const Dataset ds(y, Xl.rightCols(2), {"a", "b"});
  const RmseReport r = split_half_rmse(ds, ModelIndicator::full_model(2), BicScore{}, 10, 3);
  for (double v : r.rmse) EXPECT_LT(v, 1e-8);
}

TEST(SplitHalfRmse, ReportIsSelfConsistent) {
  const Dataset ds = crime_dataset_preprocessed();
  const ModelIndicator m = ModelIndicator::from_one_based({1, 3, 4, 9, 11, 13, 14}, 15);
  const RmseReport r = split_half_rmse(ds, m, PcepPrior{}, 20, 7);
  ASSERT_EQ(r.rmse.size(), 20u);
  ASSERT_EQ(r.predictions.size(), 20u);
  EXPECT_EQ(r.backend, "pcep");
  EXPECT_EQ(r.gamma, m);
  double sum = 0;
  for (std::size_t s = 0; s < r.rmse.size(); ++s) {
    const SplitPrediction& p = r.predictions[s];
    EXPECT_EQ(p.validation.size(), 24u);
    EXPECT_EQ(std::set<Eigen::Index>(p.validation.begin(), p.validation.end()).size(), 24u);
    const double recomputed = std::sqrt((p.observed - p.predicted).squaredNorm() / p.observed.size());
    EXPECT_NEAR(r.rmse[s], recomputed, 1e-12);
    EXPECT_GE(r.rmse[s], 0.0);
    sum += r.rmse[s];
  }
  EXPECT_NEAR(r.mean, sum / 20, 1e-12);
  const SummaryStats stats = summary_stats(r.rmse);
  EXPECT_NEAR(r.sd, stats.sd, 1e-12);
  const RmseReport again = split_half_rmse(ds, m, PcepPrior{}, 20, 7);
  EXPECT_EQ(r.rmse, again.rmse);
}

TEST(SplitHalfRmse, CrimePcepMapModel) {
  const Dataset ds = crime_dataset_preprocessed();
  const ModelIndicator m = ModelIndicator::from_one_based({1, 3, 4, 9, 11, 13, 14}, 15);
  const RmseReport r = split_half_rmse(ds, m, PcepPrior{}, 50, 0);
  EXPECT_NEAR(r.mean, 0.2262, 0.02);
  EXPECT_NEAR(r.sd, 0.0346, 0.01);
}

TEST(SplitHalfRmse, Errors) {
  const Dataset ds = crime_dataset_preprocessed();
  EXPECT_THROW(split_half_rmse(ds, ModelIndicator::full_model(15), BicScore{}, 0, 1), UsageError);
  EXPECT_THROW(split_half_rmse(ds.rows({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}), ModelIndicator::full_model(15),
                               BicScore{}, 1, 1),
               DimensionError);
}

TEST(ContourGrid, ShapeModeAndNormalisation) {
  std::mt19937_64 rng(6);
  for (double r : {0.0, 0.5, 0.9}) {
    const Eigen::Index n = 30;
    Eigen::MatrixXd X(n, 2);
    X.col(0) = oracle::random_vector(rng, n);
    X.col(1) = r * X.col(0) + std::sqrt(1 - r * r) * oracle::random_vector(rng, n);
    const Design dm(with_intercept(X));
    const GridAxis axis{-20, 20, 201};
    const auto grid = prior_contour_grid(dm, PcepConfig::defaults(n), axis, axis);
    ASSERT_EQ(grid.size(), 201u * 201u);
    double mass_p = 0, mass_g = 0, best_p = 0, best_g = 0;
    ContourPoint at_p{}, at_g{};
    for (const ContourPoint& c : grid) {
      mass_p += c.density_pcep;
      mass_g += c.density_gprior;
      if (c.density_pcep > best_p) best_p = c.density_pcep, at_p = c;
      if (c.density_gprior > best_g) best_g = c.density_gprior, at_g = c;
    }
    const double cell = 0.2 * 0.2;
    EXPECT_NEAR(mass_p * cell, 1.0, 0.02) << r;
    EXPECT_NEAR(mass_g * cell, 1.0, 0.02) << r;
    EXPECT_NEAR(at_p.beta1, 0, 1e-12);
    EXPECT_NEAR(at_p.beta2, 0, 1e-12);
    EXPECT_NEAR(at_g.beta1, 0, 1e-12);
    EXPECT_LT(best_p, best_g) << r;

    // Compare one point with the dense bivariate normal.
    const Eigen::MatrixXd vstar = oracle::dense_vstar(with_intercept(X), n * n, n);
    const Eigen::Vector2d b(0.7, -0.4);
    const double expected = std::exp(oracle::log_normal(b, Eigen::Vector2d::Zero(), vstar.bottomRightCorner(2, 2)));
    const auto one = prior_contour_grid(dm, PcepConfig::defaults(n), {0.7, 0.7, 1}, {-0.4, -0.4, 1});
    EXPECT_NEAR(one.front().density_pcep, expected, 1e-10);
  }
  EXPECT_THROW(prior_contour_grid(Design(with_intercept(Eigen::MatrixXd::Random(10, 2))), PcepConfig::defaults(10),
                                  {0, 1, 0}, {0, 1, 3}),
               UsageError);
}

TEST(CorrelationCell, HighCorrelationFavoursPcep) {
  const CorrelationCell c = correlation_cell(0.6, 0.9, 100, 100, 0);
  EXPECT_GT(c.mean_pcep, c.mean_gprior);
  EXPECT_GE(c.mean_pcep, 0);
  EXPECT_LE(c.mean_pcep, 1);
  EXPECT_GE(c.sd_gprior, 0);
}
