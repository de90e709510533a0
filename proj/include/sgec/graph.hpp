#pragma once

#include <sgec/linalg.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace sgec {

/// Hard cluster membership: one label in [0, c) per sample.
///
/// The N x c indicator G is materialized on demand; rows of G are one-hot by construction.
class Assignment {
 public:
  Assignment(std::vector<int> labels, int clusters) : labels_(std::move(labels)), clusters_(clusters) {
    if (clusters_ < 1) throw InvalidInput("assignment needs at least one cluster");
    for (int l : labels_)
      if (l < 0 || l >= clusters_) throw InvalidInput("cluster label out of range");
  }

  /// Builds from a binary indicator; every row must contain exactly one 1.
  static Assignment from_indicator(const Matrix& G) {
    std::vector<int> labels(static_cast<std::size_t>(G.rows()));
    for (Index i = 0; i < G.rows(); ++i) {
      int hit = -1;
      for (Index j = 0; j < G.cols(); ++j) {
        const double v = G(i, j);
        if (v == 1.0) {
          if (hit >= 0) throw InvalidInput("indicator row has more than one 1");
          hit = static_cast<int>(j);
        } else if (v != 0.0) {
          throw InvalidInput("indicator entries must be 0 or 1");
        }
      }
      if (hit < 0) throw InvalidInput("indicator row has no 1");
      labels[static_cast<std::size_t>(i)] = hit;
    }
    return Assignment(std::move(labels), static_cast<int>(G.cols()));
  }

  Index samples() const noexcept { return static_cast<Index>(labels_.size()); }
  int clusters() const noexcept { return clusters_; }
  int label(Index i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& labels() const noexcept { return labels_; }

  void set_label(Index i, int cluster) {
    if (cluster < 0 || cluster >= clusters_) throw InvalidInput("cluster label out of range");
    labels_[static_cast<std::size_t>(i)] = cluster;
  }

  /// Cluster sizes p_jj = sum_i g_ij.
  std::vector<Index> sizes() const {
    std::vector<Index> out(static_cast<std::size_t>(clusters_), 0);
    for (int l : labels_) ++out[static_cast<std::size_t>(l)];
    return out;
  }

  Matrix indicator() const {
    Matrix G = Matrix::Zero(samples(), clusters_);
    for (Index i = 0; i < samples(); ++i) G(i, label(i)) = 1.0;
    return G;
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<int> labels_;
  int clusters_;
};

/// Z = G P^{-1/2}. Columns of empty clusters are zero.
///
/// The companion diagonal Q (q_ii = sum_j g_ij) is the identity for every valid
/// indicator, so it is never stored.
struct NormalizedIndicator {
  Matrix values;
  std::vector<Index> cluster_sizes;

  /// <z_i, z_j>: 1/n_k when both samples sit in cluster k, otherwise 0.
  static double inner(const Assignment& G, const std::vector<Index>& sizes, Index i, Index j) {
    const int k = G.label(i);
    if (k != G.label(j)) return 0.0;
    return 1.0 / static_cast<double>(sizes[static_cast<std::size_t>(k)]);
  }
};

inline NormalizedIndicator normalized_indicator(const Assignment& G) {
  NormalizedIndicator out{Matrix::Zero(G.samples(), G.clusters()), G.sizes()};
  for (Index i = 0; i < G.samples(); ++i) {
    const int k = G.label(i);
    out.values(i, k) = 1.0 / std::sqrt(static_cast<double>(out.cluster_sizes[static_cast<std::size_t>(k)]));
  }
  return out;
}

/// Dense G P^{-1} G^T (the full, unmasked centroid-free similarity).
inline Matrix cluster_similarity(const Assignment& G) {
  const auto sizes = G.sizes();
  Matrix S = Matrix::Zero(G.samples(), G.samples());
  for (Index i = 0; i < G.samples(); ++i)
    for (Index j = 0; j < G.samples(); ++j) S(i, j) = NormalizedIndicator::inner(G, sizes, i, j);
  return S;
}

/// Symmetric kNN adjacency under the union rule, without self-loops.
class NeighborGraph {
 public:
  NeighborGraph(Index nodes, int k, std::vector<std::vector<Index>> adjacency)
      : nodes_(nodes), k_(k), adjacency_(std::move(adjacency)) {
    for (auto& row : adjacency_) std::sort(row.begin(), row.end());
  }

  Index nodes() const noexcept { return nodes_; }
  int k() const noexcept { return k_; }
  const std::vector<Index>& neighbors(Index i) const { return adjacency_[static_cast<std::size_t>(i)]; }

  bool has_edge(Index i, Index j) const {
    const auto& row = neighbors(i);
    return std::binary_search(row.begin(), row.end(), j);
  }

  /// Undirected edges (i, j) with i < j, in lexicographic order.
  std::vector<std::pair<Index, Index>> edges() const {
    std::vector<std::pair<Index, Index>> out;
    for (Index i = 0; i < nodes_; ++i)
      for (Index j : neighbors(i))
        if (i < j) out.emplace_back(i, j);
    return out;
  }

  Matrix mask() const {
    Matrix A = Matrix::Zero(nodes_, nodes_);
    for (Index i = 0; i < nodes_; ++i)
      for (Index j : neighbors(i)) A(i, j) = 1.0;
    return A;
  }

 private:
  Index nodes_;
  int k_;
  std::vector<std::vector<Index>> adjacency_;
};

/// kNN graph over the rows of `points`. Equidistant candidates resolve to the lower index.
inline NeighborGraph knn_graph(const Matrix& points, int k) {
  const Index n = points.rows();
  if (k < 1 || k > n - 1) throw InvalidInput("neighbor count must satisfy 1 <= k <= N-1");
  const DistanceMatrix D = pairwise_sq_dist(points);

  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
  std::vector<Index> order;
  for (Index i = 0; i < n; ++i) {
    order.clear();
    for (Index j = 0; j < n; ++j)
      if (j != i) order.push_back(j);
    const auto closer = [&](Index a, Index b) {
      const double da = D(i, a), db = D(i, b);
      return da < db || (da == db && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + k, order.end(), closer);
    for (int r = 0; r < k; ++r) {
      const Index j = order[static_cast<std::size_t>(r)];
      adj[static_cast<std::size_t>(i)].push_back(j);
      adj[static_cast<std::size_t>(j)].push_back(i);
    }
  }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return NeighborGraph(n, k, std::move(adj));
}

inline NeighborGraph knn_graph(const DataMatrix& X, int k) { return knn_graph(X.values(), k); }

enum class SimilarityKind { Lpp, MfaWithin, MfaBetween, Dense };

struct WeightedEdge {
  Index i;
  Index j;
  double weight;
};

/// Sparse symmetric similarity stored as its upper-triangle edge list with cached degrees.
class SimilarityGraph {
 public:
  SimilarityGraph(Index nodes, SimilarityKind kind, std::vector<WeightedEdge> edges)
      : nodes_(nodes), kind_(kind), edges_(std::move(edges)), degree_(Vector::Zero(nodes)) {
    for (auto& e : edges_) {
      if (e.i == e.j) throw InvalidInput("similarity graph has a self-loop");
      if (e.i > e.j) std::swap(e.i, e.j);
      if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) throw InvalidInput("similarity weights must be finite and >= 0");
      degree_(e.i) += e.weight;
      degree_(e.j) += e.weight;
    }
  }

  /// Validates a dense similarity: square, symmetric, nonnegative, zero diagonal.
  static SimilarityGraph from_dense(const Matrix& S, SimilarityKind kind = SimilarityKind::Dense,
                                    double tol = Tolerances{}.symmetry) {
    if (S.rows() != S.cols()) throw InvalidInput("similarity matrix must be square");
    detail::require_finite(S, "similarity matrix");
    if (S.size() > 0 && detail::symmetry_defect(S) > tol) throw InvalidInput("similarity matrix is not symmetric");
    std::vector<WeightedEdge> edges;
    for (Index i = 0; i < S.rows(); ++i) {
      if (S(i, i) != 0.0) throw InvalidInput("similarity matrix diagonal must be zero");
      for (Index j = i + 1; j < S.cols(); ++j) {
        const double w = 0.5 * (S(i, j) + S(j, i));
        if (w < 0.0) throw InvalidInput("similarity matrix has negative entries");
        if (w != 0.0) edges.push_back({i, j, w});
      }
    }
    return SimilarityGraph(S.rows(), kind, std::move(edges));
  }

  Index nodes() const noexcept { return nodes_; }
  SimilarityKind kind() const noexcept { return kind_; }
  const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }
  const Vector& degree() const noexcept { return degree_; }

  Matrix dense() const {
    Matrix S = Matrix::Zero(nodes_, nodes_);
    for (const auto& e : edges_) {
      S(e.i, e.j) = e.weight;
      S(e.j, e.i) = e.weight;
    }
    return S;
  }

  /// sum_ij ||y_i - y_j||^2 s_ij over both orderings of every pair.
  double quadratic_form(const Matrix& Y) const {
    if (Y.rows() != nodes_) throw InvalidInput("embedded matrix row count does not match graph");
    double acc = 0.0;
    for (const auto& e : edges_) acc += 2.0 * e.weight * (Y.row(e.i) - Y.row(e.j)).squaredNorm();
    return acc;
  }

 private:
  Index nodes_;
  SimilarityKind kind_;
  std::vector<WeightedEdge> edges_;
  Vector degree_;
};

namespace detail {

inline void require_same_nodes(const Assignment& G, const NeighborGraph& nbrs) {
  if (G.samples() != nbrs.nodes())
    throw InvalidInput("assignment has " + std::to_string(G.samples()) + " samples but neighbor graph has " +
                       std::to_string(nbrs.nodes()) + " nodes");
}

}  // namespace detail

/// s_ij = <z_i, z_j> on neighbor pairs, zero elsewhere.
inline SimilarityGraph self_supervised_similarity(const Assignment& G, const NeighborGraph& nbrs) {
  detail::require_same_nodes(G, nbrs);
  const auto sizes = G.sizes();
  std::vector<WeightedEdge> edges;
  for (const auto& [i, j] : nbrs.edges()) {
    const double w = NormalizedIndicator::inner(G, sizes, i, j);
    if (w != 0.0) edges.push_back({i, j, w});
  }
  return SimilarityGraph(G.samples(), SimilarityKind::Lpp, std::move(edges));
}

struct MfaGraphs {
  SimilarityGraph within;
  SimilarityGraph between;
};

/// Within/between similarities: <z_i, z_j> and 1 - <z_i, z_j> on neighbor pairs.
inline MfaGraphs mfa_similarities(const Assignment& G, const NeighborGraph& nbrs) {
  detail::require_same_nodes(G, nbrs);
  const auto sizes = G.sizes();
  std::vector<WeightedEdge> within, between;
  for (const auto& [i, j] : nbrs.edges()) {
    const double w = NormalizedIndicator::inner(G, sizes, i, j);
    if (w != 0.0) within.push_back({i, j, w});
    if (1.0 - w != 0.0) between.push_back({i, j, 1.0 - w});
  }
  return {SimilarityGraph(G.samples(), SimilarityKind::MfaWithin, std::move(within)),
          SimilarityGraph(G.samples(), SimilarityKind::MfaBetween, std::move(between))};
}

struct LaplacianPair {
  Matrix degree;     // D_S, diagonal
  Matrix laplacian;  // L_S = D_S - S
};

inline LaplacianPair laplacian(const SimilarityGraph& S) {
  Matrix D = S.degree().asDiagonal();
  Matrix L = D - S.dense();
  return {std::move(D), std::move(L)};
}

/// Dense overload; rejects asymmetric or negative input.
inline LaplacianPair laplacian(const Matrix& S) { return laplacian(SimilarityGraph::from_dense(S)); }

}  // namespace sgec
