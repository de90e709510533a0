#pragma once

#include <sgec/graph.hpp>
#include <sgec/linalg.hpp>

#include <cmath>
#include <vector>

namespace sgec {

/// ||G^T||_{2,1}: the sum of the column norms of G (of a relaxed, nonnegative G).
inline double l21_norm_rows_of_transpose(const Matrix& G) {
  detail::require_finite(G, "indicator");
  if (G.size() > 0 && G.minCoeff() < 0.0) throw InvalidInput("indicator must be nonnegative");
  return G.colwise().norm().sum();
}

/// For a hard assignment the column norms are sqrt(n_j).
inline double l21_norm_rows_of_transpose(const Assignment& G) {
  double acc = 0.0;
  for (Index n : G.sizes()) acc += std::sqrt(static_cast<double>(n));
  return acc;
}

/// H = G diag(1/||g_1||, ..., 1/||g_c||), the gradient of ||G^T||_{2,1} at G.
/// Columns of empty clusters are zero.
struct BalanceSubgradient {
  Matrix values;
};

inline BalanceSubgradient balance_subgradient(const Assignment& G) {
  const auto sizes = G.sizes();
  BalanceSubgradient H{Matrix::Zero(G.samples(), G.clusters())};
  for (Index i = 0; i < G.samples(); ++i) {
    const int k = G.label(i);
    H.values(i, k) = 1.0 / std::sqrt(static_cast<double>(sizes[static_cast<std::size_t>(k)]));
  }
  return H;
}

/// tr(G^T D G) = sum_ij d_ij [label_i == label_j].
inline double within_cluster_distance(const DistanceMatrix& D, const Assignment& G) {
  if (D.size() != G.samples()) throw InvalidInput("distance matrix size does not match assignment");
  double acc = 0.0;
  for (Index j = 0; j < D.size(); ++j)
    for (Index i = 0; i < D.size(); ++i)
      if (G.label(i) == G.label(j)) acc += D(i, j);
  return acc;
}

/// tr(G^T D G) - beta ||G^T||_{2,1}.
inline double assignment_objective(const DistanceMatrix& D, const Assignment& G, double beta) {
  return within_cluster_distance(D, G) - beta * l21_norm_rows_of_transpose(G);
}

/// tr(G^T D G) - beta <H, G>: the linearized objective minimized by one sweep.
inline double surrogate_objective(const DistanceMatrix& D, const Assignment& G, const BalanceSubgradient& H,
                                  double beta) {
  return within_cluster_distance(D, G) - beta * (H.values.cwiseProduct(G.indicator())).sum();
}

/// Scores 2 G^T d_i - beta (h^i)^T for every cluster, with G the current state.
inline Vector row_scores(const Assignment& G, const DistanceMatrix& D, const BalanceSubgradient& H, double beta,
                         Index i) {
  Vector score = Vector::Zero(G.clusters());
  const auto col = D.values().col(i);
  for (Index j = 0; j < G.samples(); ++j) score(G.label(j)) += col(j);
  score *= 2.0;
  score -= beta * H.values.row(i).transpose();
  return score;
}

namespace detail {

/// Lowest index wins ties.
inline int argmin(const Vector& v) {
  int best = 0;
  for (Index j = 1; j < v.size(); ++j)
    if (v(j) < v(best)) best = static_cast<int>(j);
  return best;
}

inline void check_row_inputs(const Assignment& G, const DistanceMatrix& D, const BalanceSubgradient& H) {
  if (D.size() != G.samples()) throw InvalidInput("distance matrix size does not match assignment");
  if (H.values.rows() != G.samples() || H.values.cols() != G.clusters())
    throw InvalidInput("balance subgradient shape does not match assignment");
}

}  // namespace detail

/// Moves row i to the cluster with the lowest score. Returns true if the label changed.
inline bool update_row_in_place(Assignment& G, const DistanceMatrix& D, const BalanceSubgradient& H, double beta,
                                Index i) {
  const int best = detail::argmin(row_scores(G, D, H, beta, i));
  if (best == G.label(i)) return false;
  G.set_label(i, best);
  return true;
}

inline Assignment update_row(Assignment G, const DistanceMatrix& D, const BalanceSubgradient& H, double beta,
                             Index i) {
  detail::check_row_inputs(G, D, H);
  if (i < 0 || i >= G.samples()) throw InvalidInput("row index out of range");
  update_row_in_place(G, D, H, beta, i);
  return G;
}

/// Refills every empty cluster from the largest one, taking the member with the
/// largest distance sum to its own cluster. Returns the number of moves.
///
/// With nonnegative distances and beta >= 0 a move into an empty cluster never
/// increases the objective: the donor loses distance terms and
/// sqrt(n - 1) + 1 >= sqrt(n).
inline int repair_empty_clusters(Assignment& G, const DistanceMatrix& D) {
  if (G.samples() < G.clusters()) return 0;
  int moves = 0;
  for (;;) {
    const auto sizes = G.sizes();
    int empty = -1, largest = 0;
    for (int j = 0; j < G.clusters(); ++j) {
      const auto sz = sizes[static_cast<std::size_t>(j)];
      if (sz == 0 && empty < 0) empty = j;
      if (sz > sizes[static_cast<std::size_t>(largest)]) largest = j;
    }
    if (empty < 0) return moves;

    Index pick = -1;
    double worst = -1.0;
    for (Index i = 0; i < G.samples(); ++i) {
      if (G.label(i) != largest) continue;
      double sum = 0.0;
      for (Index j = 0; j < G.samples(); ++j)
        if (G.label(j) == largest) sum += D(i, j);
      if (sum > worst) {
        worst = sum;
        pick = i;
      }
    }
    G.set_label(pick, empty);
    ++moves;
  }
}

struct AssignmentSolveConfig {
  double beta = 0.0;
  int max_sweeps = 100;
  double tol = 0.0;  // also stop once a sweep lowers the objective by no more than this (0 disables)
};

struct AssignmentSolveResult {
  Assignment assignment;
  std::vector<double> objective_trace;  // true objective after each sweep (and repair)
  int sweeps = 0;
  int repairs = 0;
  bool converged = false;
};

/// beta = mean(D) N / c.
inline double auto_beta(const DistanceMatrix& D, int clusters) {
  if (D.size() == 0) return 0.0;
  return D.values().mean() * static_cast<double>(D.size()) / static_cast<double>(clusters);
}

/// Majorization-minimization over hard assignments.
///
/// Each sweep refreshes H at the current G and updates rows in index order against the
/// live state. Since ||G^T||_{2,1} is convex, the linearized objective upper-bounds the true
/// one and is tight at the sweep start, so the true objective never increases.
inline AssignmentSolveResult solve_assignment(const DistanceMatrix& D, const Assignment& G_init,
                                              const AssignmentSolveConfig& cfg) {
  if (D.size() != G_init.samples()) throw InvalidInput("distance matrix size does not match assignment");
  if (!std::isfinite(cfg.beta) || cfg.beta < 0.0) throw InvalidInput("beta must be finite and >= 0");
  if (cfg.max_sweeps < 1) throw InvalidInput("max_sweeps must be >= 1");

  AssignmentSolveResult out{G_init, {}, 0, 0, false};
  Assignment& G = out.assignment;
  double previous = assignment_objective(D, G, cfg.beta);
  while (out.sweeps < cfg.max_sweeps) {
    const BalanceSubgradient H = balance_subgradient(G);
    int changed = 0;
    for (Index i = 0; i < G.samples(); ++i) changed += update_row_in_place(G, D, H, cfg.beta, i) ? 1 : 0;
    const int repaired = repair_empty_clusters(G, D);
    out.repairs += repaired;
    ++out.sweeps;
    const double current = assignment_objective(D, G, cfg.beta);
    out.objective_trace.push_back(current);
    if (changed + repaired == 0 || (cfg.tol > 0.0 && previous - current <= cfg.tol)) {
      out.converged = true;
      break;
    }
    previous = current;
  }
  return out;
}

}  // namespace sgec
