#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

using namespace sgec;
using sgec::testing::for_each_labeling;
using sgec::testing::random_assignment;
using sgec::testing::random_matrix;
using sgec::testing::uniform_int;

namespace {

Matrix column(std::initializer_list<double> v) {
  Matrix M(static_cast<Index>(v.size()), 1);
  Index i = 0;
  for (double x : v) M(i++, 0) = x;
  return M;
}

// Centroid objective computed from scratch: per-cluster mean, then squared deviations.
double kmeans_oracle(const Matrix& X, const Assignment& G) {
  double total = 0.0;
  for (int k = 0; k < G.clusters(); ++k) {
    Vector mean = Vector::Zero(X.cols());
    int count = 0;
    for (Index i = 0; i < X.rows(); ++i)
      if (G.label(i) == k) {
        mean += X.row(i).transpose();
        ++count;
      }
    if (count == 0) continue;
    mean /= count;
    for (Index i = 0; i < X.rows(); ++i)
      if (G.label(i) == k) total += (X.row(i).transpose() - mean).squaredNorm();
  }
  return total;
}

}  // namespace

TEST(InitializeAssignment, BalancedSizes) {
  const auto sizes = initialize_assignment(10, 3, 0).sizes();
  std::vector<Index> sorted(sizes.begin(), sizes.end());
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<Index>{3, 3, 4}));
  EXPECT_EQ(initialize_assignment(4, 4, 7).sizes(), (std::vector<Index>{1, 1, 1, 1}));
  EXPECT_EQ(initialize_assignment(5, 1, 7), Assignment({0, 0, 0, 0, 0}, 1));
}

TEST(InitializeAssignment, DeterministicPerSeed) {
  EXPECT_EQ(initialize_assignment(50, 4, 11), initialize_assignment(50, 4, 11));
  EXPECT_FALSE(initialize_assignment(50, 4, 11) == initialize_assignment(50, 4, 12));
}

TEST(InitializeAssignment, RejectsBadCounts) {
  EXPECT_THROW(initialize_assignment(3, 4, 0), InvalidInput);
  EXPECT_THROW(initialize_assignment(3, 0, 0), InvalidInput);
}

TEST(KMeansObjective, Example) {
  const Matrix X = column({0, 1, 10, 11});
  const Assignment G({0, 0, 1, 1}, 2);
  const CentroidSet U = centroids(X, G);
  EXPECT_NEAR(U.values(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(U.values(1, 0), 10.5, 1e-15);
  EXPECT_NEAR(kmeans_objective(X, G), 1.0, 1e-12);
}

TEST(KMeansObjective, DegenerateCases) {
  std::mt19937_64 rng(97);
  const Matrix X = random_matrix(rng, 5, 2);
  EXPECT_NEAR(kmeans_objective(X, Assignment({0, 1, 2, 3, 4}, 5)), 0.0, 1e-15);
  EXPECT_EQ(kmeans_objective(Matrix::Ones(4, 3), Assignment({0, 1, 1, 0}, 2)), 0.0);
  EXPECT_EQ(manifold_objective(Matrix::Ones(4, 3), Assignment({0, 1, 1, 0}, 2)), 0.0);
  EXPECT_NEAR(manifold_objective(X, Assignment({0, 1, 2, 3, 4}, 5)), 0.0, 1e-15);
}

TEST(ManifoldObjective, Example) {
  const Matrix X = column({0, 1, 10, 11});
  EXPECT_NEAR(manifold_objective(X, Assignment({0, 0, 1, 1}, 2)), 2.0, 1e-12);
}

TEST(ManifoldObjective, TwiceTheCentroidObjective) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = uniform_int(rng, 1, 25);
    const Matrix X = random_matrix(rng, n, uniform_int(rng, 1, 5));
    const Assignment G = random_assignment(rng, n, uniform_int(rng, 1, 4));
    const double km = kmeans_oracle(X, G);
    EXPECT_NEAR(kmeans_objective(X, G), km, 1e-10 * std::max(1.0, km));
    EXPECT_NEAR(manifold_objective(X, G), 2.0 * km, 1e-9 * std::max(1.0, km));
  }
}

TEST(ManifoldObjective, SameMinimizersAsCentroidObjective) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = uniform_int(rng, 3, 7);
    const int c = uniform_int(rng, 2, 3);
    const Matrix X = random_matrix(rng, n, 2);
    double best_km = std::numeric_limits<double>::infinity(), best_mf = best_km;
    for_each_labeling(n, c, [&](const Assignment& G) {
      best_km = std::min(best_km, kmeans_oracle(X, G));
      best_mf = std::min(best_mf, manifold_objective(X, G));
    });
    EXPECT_NEAR(best_mf, 2.0 * best_km, 1e-9);
  }
}

TEST(KMeansLloyd, SeparatedGroups) {
  const KMeansResult out = kmeans_lloyd(column({0, 1, 10, 11}), 2, 0);
  EXPECT_TRUE(out.converged);
  EXPECT_EQ(out.assignment.label(0), out.assignment.label(1));
  EXPECT_EQ(out.assignment.label(2), out.assignment.label(3));
  EXPECT_NE(out.assignment.label(0), out.assignment.label(2));
  EXPECT_NEAR(out.objective_trace.back(), 1.0, 1e-12);
}

TEST(KMeansLloyd, ExactClusters) {
  const KMeansResult out = kmeans_lloyd(column({0, 0, 2, 2}), 2, 3);
  EXPECT_EQ(out.assignment.label(0), out.assignment.label(1));
  EXPECT_NE(out.assignment.label(0), out.assignment.label(2));
  EXPECT_EQ(out.objective_trace.back(), 0.0);
  EXPECT_EQ(out.centroids.values(out.assignment.label(0), 0), 0.0);
  EXPECT_EQ(out.centroids.values(out.assignment.label(2), 0), 2.0);
}

TEST(KMeansLloyd, OneClusterPerPoint) {
  std::mt19937_64 rng(105);
  const KMeansResult out = kmeans_lloyd(random_matrix(rng, 6, 2), 6, 1);
  EXPECT_EQ(out.assignment.sizes(), std::vector<Index>(6, 1));
  EXPECT_EQ(out.objective_trace.back(), 0.0);
}

TEST(KMeansLloyd, TraceNonIncreasingAndNoEmptyClusters) {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = uniform_int(rng, 5, 60);
    const int c = uniform_int(rng, 1, 5);
    const KMeansResult out = kmeans_lloyd(random_matrix(rng, n, 3), c, static_cast<std::uint64_t>(trial));
    for (std::size_t t = 1; t < out.objective_trace.size(); ++t)
      EXPECT_LE(out.objective_trace[t], out.objective_trace[t - 1] + 1e-10);
    for (Index s : out.assignment.sizes()) EXPECT_GE(s, 1);
  }
}

TEST(KMeansLloyd, IdenticalPointsStillFillEveryCluster) {
  const KMeansResult out = kmeans_lloyd(Matrix::Ones(6, 2), 3, 0);
  for (Index s : out.assignment.sizes()) EXPECT_GE(s, 1);
  EXPECT_EQ(out.objective_trace.back(), 0.0);
}

TEST(Fit, RecoversBlobs) {
  const LabeledData data = make_blobs({});
  for (Method method : {Method::OurLpp, Method::OurMfa, Method::KMeans}) {
    FitConfig cfg;
    cfg.method = method;
    cfg.clusters = 3;
    cfg.neighbors = 10;
    const FitReport report = fit(DataMatrix(data.X), cfg);
    EXPECT_GE(accuracy(report.assignment, LabelVector(data.labels)), 0.95) << to_string(method);
    EXPECT_LE(report.outer_iters, cfg.max_outer);
    EXPECT_EQ(static_cast<std::size_t>(report.outer_iters), report.objective_trace.size());
  }
}

TEST(Fit, RecoversBlobsWithoutNoiseFeatures) {
  BlobSpec spec;
  spec.features = 10;
  const LabeledData data = make_blobs(spec);
  FitConfig cfg;
  cfg.clusters = 3;
  EXPECT_GE(accuracy(fit(DataMatrix(data.X), cfg).assignment, LabelVector(data.labels)), 0.95);
}

TEST(Fit, SingleClusterTakesOneIteration) {
  std::mt19937_64 rng(109);
  FitConfig cfg;
  cfg.clusters = 1;
  cfg.neighbors = 3;
  const FitReport report = fit(DataMatrix(random_matrix(rng, 10, 4)), cfg);
  EXPECT_EQ(report.outer_iters, 1);
  EXPECT_TRUE(report.converged);
  EXPECT_EQ(report.assignment.sizes(), (std::vector<Index>{10}));
}

TEST(Fit, IdenticalRowsGiveZeroObjective) {
  FitConfig cfg;
  cfg.clusters = 2;
  cfg.neighbors = 2;
  const FitReport report = fit(DataMatrix(Matrix::Ones(6, 3)), cfg);
  for (double v : report.objective_trace) EXPECT_EQ(v, 0.0);
  for (Index s : report.assignment.sizes()) EXPECT_GE(s, 1);
}

TEST(Fit, DeterministicForFixedSeed) {
  BlobSpec spec;
  spec.samples = 90;
  spec.seed = 4;
  const DataMatrix X(make_blobs(spec).X);
  for (Method method : {Method::OurLpp, Method::OurMfa, Method::KMeans}) {
    FitConfig cfg;
    cfg.method = method;
    cfg.clusters = 3;
    cfg.seed = 17;
    const FitReport a = fit(X, cfg), b = fit(X, cfg);
    EXPECT_EQ(a.assignment, b.assignment) << to_string(method);
    EXPECT_EQ(a.objective_trace, b.objective_trace) << to_string(method);
  }
}

TEST(Fit, RespectsIterationCap) {
  std::mt19937_64 rng(113);
  const DataMatrix X(random_matrix(rng, 40, 5));
  for (int cap : {1, 2, 3}) {
    FitConfig cfg;
    cfg.clusters = 4;
    cfg.max_outer = cap;
    EXPECT_LE(fit(X, cfg).outer_iters, cap);
  }
}

TEST(Fit, OptionalPathsRun) {
  const LabeledData data = make_blobs({});
  FitConfig cfg;
  cfg.clusters = 3;
  cfg.neighbors = 10;
  cfg.standardize = true;
  cfg.recompute_knn_embedded = true;
  cfg.init = InitMethod::KMeans;
  EXPECT_GE(accuracy(fit(DataMatrix(data.X), cfg).assignment, LabelVector(data.labels)), 0.95);

  cfg = FitConfig{};
  cfg.method = Method::OurMfa;
  cfg.clusters = 3;
  cfg.mfa_distances = MfaAssignmentDistances::NeighborMasked;
  const FitReport masked = fit(DataMatrix(data.X), cfg);
  EXPECT_EQ(masked.assignment.samples(), 300);
}

TEST(Fit, RejectsInvalidConfigs) {
  std::mt19937_64 rng(127);
  const DataMatrix X(random_matrix(rng, 8, 3));
  const auto with = [](auto edit) {
    FitConfig cfg;
    edit(cfg);
    return cfg;
  };
  EXPECT_THROW(fit(X, with([](FitConfig& c) { c.clusters = 0; })), InvalidInput);
  EXPECT_THROW(fit(X, with([](FitConfig& c) { c.clusters = 9; })), InvalidInput);
  EXPECT_THROW(fit(X, with([](FitConfig& c) { c.neighbors = 8; })), InvalidInput);
  EXPECT_THROW(fit(X, with([](FitConfig& c) { c.neighbors = 0; })), InvalidInput);
  EXPECT_THROW(fit(X, with([](FitConfig& c) { c.target_dim = 4; })), InvalidInput);
  EXPECT_THROW(fit(X, with([](FitConfig& c) { c.eta = -1; })), InvalidInput);
  EXPECT_THROW(fit(X, with([](FitConfig& c) { c.beta = -0.5; })), InvalidInput);
  EXPECT_THROW(fit(X, with([](FitConfig& c) { c.max_outer = 0; })), InvalidInput);
  EXPECT_THROW(fit(X, with([](FitConfig& c) { c.tol = 0; })), InvalidInput);
}

TEST(Fit, MethodNamesRoundTrip) {
  for (Method m : {Method::OurLpp, Method::OurMfa, Method::KMeans}) EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_THROW(parse_method("spectral"), InvalidInput);
}

TEST(StandardizeColumns, ZeroMeanUnitVariance) {
  std::mt19937_64 rng(131);
  Matrix X = random_matrix(rng, 20, 3, 4.0);
  X.col(2).setConstant(7.0);
  const Matrix Z = standardize_columns(X);
  for (Index c = 0; c < 2; ++c) {
    EXPECT_NEAR(Z.col(c).mean(), 0.0, 1e-12);
    EXPECT_NEAR(Z.col(c).squaredNorm() / 20.0, 1.0, 1e-12);
  }
  EXPECT_TRUE(Z.col(2).isZero(0.0));
}
