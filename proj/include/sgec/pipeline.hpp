#pragma once

// Joint projection / assignment loop.
//
// Cost per outer iteration: O(d^3) for the projection eigenproblem (times the trace-ratio
// iterations for the MFA variant) plus O(N^2 d m) for embedded distances and O(N^2) per
// assignment sweep. Overall O(t3 (t1 d^3 + t2 N^2 d m)) with t1, t2, t3 the inner and
// outer iteration counts.

#include <sgec/assignment.hpp>
#include <sgec/embedding.hpp>
#include <sgec/graph.hpp>
#include <sgec/linalg.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace sgec {

enum class Method { OurLpp, OurMfa, KMeans };
enum class InitMethod { BalancedRandom, KMeans };

/// Distances the MFA variant hands to the assignment step.
enum class MfaAssignmentDistances { Full, NeighborMasked };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::OurLpp: return "our-lpp";
    case Method::OurMfa: return "our-mfa";
    case Method::KMeans: return "kmeans";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  if (s == "our-lpp") return Method::OurLpp;
  if (s == "our-mfa") return Method::OurMfa;
  if (s == "kmeans") return Method::KMeans;
  throw InvalidInput("unknown method '" + s + "'");
}

struct FitConfig {
  Method method = Method::OurLpp;
  int clusters = 2;
  int neighbors = 5;
  Index target_dim = 0;        // 0 selects min(clusters, d)
  double eta = 1.0;
  std::optional<double> beta;  // empty selects mean(D) N / c each outer iteration
  int max_outer = 50;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  bool standardize = false;
  bool recompute_knn_embedded = false;
  InitMethod init = InitMethod::BalancedRandom;
  int max_sweeps = 100;
  int kmeans_max_iter = 300;
  MfaAssignmentDistances mfa_distances = MfaAssignmentDistances::Full;
  TraceRatioOptions trace_ratio;

  Index effective_dim(Index features) const {
    return target_dim > 0 ? target_dim : std::min<Index>(clusters, features);
  }

  void validate(Index samples, Index features) const {
    if (clusters < 1) throw InvalidInput("clusters must be >= 1");
    if (clusters > samples) throw InvalidInput("clusters must not exceed the sample count");
    if (max_outer < 1) throw InvalidInput("max_outer must be >= 1");
    if (!(tol > 0.0)) throw InvalidInput("tol must be > 0");
    if (method == Method::KMeans) return;
    if (neighbors < 1 || neighbors > samples - 1) throw InvalidInput("neighbors must satisfy 1 <= k <= N-1");
    const Index m = effective_dim(features);
    if (m < 1 || m > features) throw InvalidInput("target dimension must satisfy 1 <= m <= d");
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidInput("eta must be finite and >= 0");
    if (beta && (!(*beta >= 0.0) || !std::isfinite(*beta))) throw InvalidInput("beta must be finite and >= 0");
  }
};

struct FitReport {
  Assignment assignment;
  std::optional<Projection> projection;
  std::vector<double> objective_trace;  // one entry per outer iteration
  int outer_iters = 0;
  bool converged = false;
  double wall_time = 0.0;  // seconds
  FitConfig config;
};

/// Cluster means, one per row. Empty clusters keep a zero row.
struct CentroidSet {
  Matrix values;
};

namespace detail {

/// Unbiased integer in [0, bound) from a 64-bit engine, independent of the standard
/// library's distribution implementation.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do r = rng();
  while (r >= limit);
  return r % bound;
}

inline double uniform_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double sq_dist(const Matrix& A, Index i, const Matrix& B, Index j) { return (A.row(i) - B.row(j)).squaredNorm(); }

}  // namespace detail

/// Balanced random labels: sizes differ by at most one, order shuffled from `seed`.
inline Assignment initialize_assignment(Index samples, int clusters, std::uint64_t seed) {
  if (clusters < 1) throw InvalidInput("clusters must be >= 1");
  if (clusters > samples) throw InvalidInput("clusters must not exceed the sample count");
  std::vector<int> labels(static_cast<std::size_t>(samples));
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % static_cast<std::size_t>(clusters));
  std::mt19937_64 rng(seed);
  for (std::size_t i = labels.size(); i > 1; --i) std::swap(labels[i - 1], labels[detail::uniform_below(rng, i)]);
  return Assignment(std::move(labels), clusters);
}

inline CentroidSet centroids(const Matrix& X, const Assignment& G) {
  CentroidSet U{Matrix::Zero(G.clusters(), X.cols())};
  const auto sizes = G.sizes();
  for (Index i = 0; i < X.rows(); ++i) U.values.row(G.label(i)) += X.row(i);
  for (int j = 0; j < G.clusters(); ++j)
    if (sizes[static_cast<std::size_t>(j)] > 0) U.values.row(j) /= static_cast<double>(sizes[static_cast<std::size_t>(j)]);
  return U;
}

/// sum_ij g_ij ||x_i - u_j||^2 with u_j the cluster means.
inline double kmeans_objective(const Matrix& X, const Assignment& G) {
  if (X.rows() != G.samples()) throw InvalidInput("assignment size does not match sample count");
  const CentroidSet U = centroids(X, G);
  double acc = 0.0;
  for (Index i = 0; i < X.rows(); ++i) acc += detail::sq_dist(X, i, U.values, G.label(i));
  return acc;
}

inline double kmeans_objective(const DataMatrix& X, const Assignment& G) { return kmeans_objective(X.values(), G); }

/// sum_ij ||x_i - x_j||^2 s_ij with the full similarity S = G P^{-1} G^T; no centroids involved.
inline double manifold_objective(const Matrix& X, const Assignment& G) {
  if (X.rows() != G.samples()) throw InvalidInput("assignment size does not match sample count");
  const auto sizes = G.sizes();
  double acc = 0.0;
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = 0; j < X.rows(); ++j)
      acc += NormalizedIndicator::inner(G, sizes, i, j) * detail::sq_dist(X, i, X, j);
  return acc;
}

inline double manifold_objective(const DataMatrix& X, const Assignment& G) { return manifold_objective(X.values(), G); }

struct KMeansResult {
  Assignment assignment;
  CentroidSet centroids;
  std::vector<double> objective_trace;  // after each assignment + centroid step
  int iterations = 0;
  bool converged = false;
};

/// Lloyd's algorithm with k-means++ seeding. Nearest-centroid ties go to the lower index;
/// an empty cluster takes the point farthest from its own centroid.
inline KMeansResult kmeans_lloyd(const Matrix& X, int clusters, std::uint64_t seed, int max_iter = 300) {
  const Index n = X.rows();
  if (clusters < 1 || clusters > n) throw InvalidInput("clusters must satisfy 1 <= c <= N");
  if (max_iter < 1) throw InvalidInput("max_iter must be >= 1");
  detail::require_finite(X, "data matrix");

  std::mt19937_64 rng(seed);
  Matrix U(clusters, X.cols());
  {
    Index first = static_cast<Index>(detail::uniform_below(rng, static_cast<std::uint64_t>(n)));
    U.row(0) = X.row(first);
    Vector best = Vector::Constant(n, std::numeric_limits<double>::infinity());
    for (int c = 1; c < clusters; ++c) {
      for (Index i = 0; i < n; ++i) best(i) = std::min(best(i), detail::sq_dist(X, i, U, c - 1));
      const double total = best.sum();
      Index pick = 0;
      if (total > 0.0) {
        // Sample proportional to squared distance; rounding falls back to the last candidate.
        double target = detail::uniform_unit(rng) * total;
        for (Index i = 0; i < n; ++i) {
          if (best(i) <= 0.0) continue;
          pick = i;
          target -= best(i);
          if (target < 0.0) break;
        }
      } else {
        pick = static_cast<Index>(detail::uniform_below(rng, static_cast<std::uint64_t>(n)));
      }
      U.row(c) = X.row(pick);
    }
  }

  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  KMeansResult out{Assignment(std::vector<int>(static_cast<std::size_t>(n), 0), clusters), {U}, {}, 0, false};
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double bd = detail::sq_dist(X, i, U, 0);
      for (int c = 1; c < clusters; ++c) {
        const double d = detail::sq_dist(X, i, U, c);
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      if (labels[static_cast<std::size_t>(i)] != best) changed = true;
      labels[static_cast<std::size_t>(i)] = best;
    }

    Assignment G(labels, clusters);
    for (int c = 0; c < clusters; ++c) {
      if (G.sizes()[static_cast<std::size_t>(c)] > 0) continue;
      const CentroidSet cur = centroids(X, G);
      Index far = -1;
      double fd = -1.0;
      for (Index i = 0; i < n; ++i) {
        if (G.sizes()[static_cast<std::size_t>(G.label(i))] < 2) continue;
        const double d = detail::sq_dist(X, i, cur.values, G.label(i));
        if (d > fd) {
          fd = d;
          far = i;
        }
      }
      G.set_label(far, c);
      labels[static_cast<std::size_t>(far)] = c;
      changed = true;
    }

    out.centroids = centroids(X, G);
    U = out.centroids.values;
    out.assignment = std::move(G);
    out.objective_trace.push_back(kmeans_objective(X, out.assignment));
    out.iterations = it + 1;
    if (!changed) {
      out.converged = true;
      break;
    }
  }
  return out;
}

/// Per-feature z-scores; constant features are only centered.
inline Matrix standardize_columns(const Matrix& X) {
  Matrix out = X.rowwise() - X.colwise().mean();
  for (Index c = 0; c < out.cols(); ++c) {
    const double sd = std::sqrt(out.col(c).squaredNorm() / static_cast<double>(out.rows()));
    if (sd > 0.0) out.col(c) /= sd;
  }
  return out;
}

namespace detail {

inline int count_changes(const Assignment& a, const Assignment& b) {
  int n = 0;
  for (Index i = 0; i < a.samples(); ++i) n += a.label(i) != b.label(i) ? 1 : 0;
  return n;
}

inline DistanceMatrix mask_distances(const DistanceMatrix& D, const NeighborGraph& nbrs) {
  return DistanceMatrix(D.values().cwiseProduct(nbrs.mask()));
}

}  // namespace detail

/// Alternates the projection solve and the assignment solve until labels stop changing,
/// the recorded objective stalls (relative change <= tol), or max_outer is reached.
///
/// The recorded objective is sum_ij ||x_i W - x_j W||^2 s_ij with S rebuilt from the
/// post-update labels.
inline FitReport fit(const DataMatrix& input, const FitConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate(input.samples(), input.features());
  const DataMatrix X = cfg.standardize ? DataMatrix(standardize_columns(input.values())) : input;
  const Index n = X.samples();

  FitReport report{initialize_assignment(n, 1, cfg.seed), std::nullopt, {}, 0, false, 0.0, cfg};
  const auto finish = [&]() {
    report.outer_iters = static_cast<int>(report.objective_trace.size());
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  };

  if (cfg.method == Method::KMeans) {
    auto km = kmeans_lloyd(X.values(), cfg.clusters, cfg.seed, std::min(cfg.kmeans_max_iter, cfg.max_outer));
    report.assignment = std::move(km.assignment);
    report.objective_trace = std::move(km.objective_trace);
    report.converged = km.converged;
    return finish();
  }

  const Index m = cfg.effective_dim(X.features());
  NeighborGraph nbrs = knn_graph(X, cfg.neighbors);

  if (cfg.clusters == 1) {
    const SimilarityGraph S = self_supervised_similarity(report.assignment, nbrs);
    const Projection W = solve_projection_lpp(X, S, cfg.eta, m);
    report.objective_trace.push_back(S.quadratic_form(embed(X, W)));
    report.projection = W;
    report.converged = true;
    return finish();
  }

  Assignment G = cfg.init == InitMethod::KMeans
                     ? kmeans_lloyd(X.values(), cfg.clusters, cfg.seed, cfg.kmeans_max_iter).assignment
                     : initialize_assignment(n, cfg.clusters, cfg.seed);

  for (int t = 0; t < cfg.max_outer; ++t) {
    std::optional<Projection> W;
    if (cfg.method == Method::OurLpp) {
      W = solve_projection_lpp(X, self_supervised_similarity(G, nbrs), cfg.eta, m);
    } else {
      const MfaGraphs graphs = mfa_similarities(G, nbrs);
      W = solve_projection_mfa(X, graphs.within, graphs.between, m, cfg.trace_ratio).projection;
    }
    const Matrix Y = embed(X, *W);
    if (cfg.recompute_knn_embedded) nbrs = knn_graph(Y, cfg.neighbors);

    DistanceMatrix D = pairwise_sq_dist(Y);
    if (cfg.method == Method::OurMfa && cfg.mfa_distances == MfaAssignmentDistances::NeighborMasked)
      D = detail::mask_distances(D, nbrs);
    const double beta = cfg.beta ? *cfg.beta : auto_beta(D, cfg.clusters);
    auto solved = solve_assignment(D, G, {beta, cfg.max_sweeps, 0.0});

    const int changes = detail::count_changes(G, solved.assignment);
    G = std::move(solved.assignment);
    const double objective = self_supervised_similarity(G, nbrs).quadratic_form(Y);
    const bool stalled = !report.objective_trace.empty() &&
                         std::abs(report.objective_trace.back() - objective) <=
                             cfg.tol * std::max(std::abs(report.objective_trace.back()),
                                                std::numeric_limits<double>::min());
    report.objective_trace.push_back(objective);
    report.projection = std::move(W);
    if (changes == 0 || stalled) {
      report.converged = true;
      break;
    }
  }
  report.assignment = std::move(G);
  return finish();
}

}  // namespace sgec
