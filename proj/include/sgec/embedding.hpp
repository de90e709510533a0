#pragma once

#include <sgec/graph.hpp>
#include <sgec/linalg.hpp>

#include <cmath>
#include <limits>
#include <vector>

namespace sgec {

/// X W, one embedded sample per row.
inline Matrix embed(const Matrix& X, const Matrix& W) {
  if (X.cols() != W.rows()) throw InvalidInput("projection row count does not match feature count");
  return X * W;
}

inline Matrix embed(const DataMatrix& X, const Projection& W) { return embed(X.values(), W.values()); }

/// X^T L_S X, accumulated edge by edge: sum over edges of w (x_i - x_j)(x_i - x_j)^T.
inline Matrix laplacian_scatter(const Matrix& X, const SimilarityGraph& S) {
  if (X.rows() != S.nodes()) throw InvalidInput("similarity graph size does not match sample count");
  Matrix out = Matrix::Zero(X.cols(), X.cols());
  Vector diff(X.cols());
  for (const auto& e : S.edges()) {
    diff = (X.row(e.i) - X.row(e.j)).transpose();
    out.selfadjointView<Eigen::Lower>().rankUpdate(diff, e.weight);
  }
  return out.selfadjointView<Eigen::Lower>();
}

/// X^T D_S X.
inline Matrix degree_scatter(const Matrix& X, const SimilarityGraph& S) {
  if (X.rows() != S.nodes()) throw InvalidInput("similarity graph size does not match sample count");
  return X.transpose() * S.degree().asDiagonal() * X;
}

/// X^T (L_S - eta D_S) X: the matrix whose smallest eigenvectors form the LPP projection.
inline Matrix lpp_target(const Matrix& X, const SimilarityGraph& S, double eta) {
  return laplacian_scatter(X, S) - eta * degree_scatter(X, S);
}

/// tr(W^T A W).
inline double trace_form(const Matrix& A, const Matrix& W) { return (W.transpose() * A * W).trace(); }

/// min tr(W^T X^T (L_S - eta D_S) X W) subject to W^T W = I.
///
/// Given a fixed assignment and neighbor graph the similarity is fully determined,
/// so a single eigen-decomposition is the whole solve.
inline Projection solve_projection_lpp(const DataMatrix& X, const SimilarityGraph& S, double eta, Index m,
                                       const Tolerances& tol = {}) {
  if (m < 1 || m > X.features()) throw InvalidInput("target dimension must satisfy 1 <= m <= d");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidInput("eta must be finite and >= 0");
  const EigenPairs eig = sym_eig_smallest(lpp_target(X.values(), S, eta), m, tol);
  return Projection(eig.vectors, tol.orthonormality);
}

struct TraceRatioOptions {
  double tol = 1e-8;
  int max_iter = 50;
  double denominator_floor = 1e-12;
};

struct TraceRatioResult {
  Matrix W;
  double ratio = 0.0;
  double initial_ratio = 0.0;
  std::vector<double> ratio_trace;  // accepted ratios, starting with the initial one
};

/// min tr(W^T A W) / tr(W^T B W) over orthonormal d x m W, for symmetric PSD A and B.
///
/// Starts from the smallest eigenvectors of A and alternates
///   W <- smallest-m eigenvectors of (A - lambda B),  lambda <- tr(W^T A W) / tr(W^T B W).
/// A step is accepted only if it lowers lambda by at least `tol`; the first step that does not
/// ends the iteration, so the ratio trace is strictly decreasing.
inline TraceRatioResult trace_ratio_minimize(const Matrix& A, const Matrix& B, Index m,
                                             const TraceRatioOptions& opts = {}, const Tolerances& tol = {}) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw InvalidInput("trace-ratio matrices differ in shape");
  if (m < 1 || m > A.rows()) throw InvalidInput("target dimension must satisfy 1 <= m <= d");

  Matrix W = sym_eig_smallest(A, m, tol).vectors;
  double den = trace_form(B, W);
  if (den <= opts.denominator_floor) {
    // Fall back to the directions where the denominator is largest.
    W = sym_eig_smallest(-B, m, tol).vectors;
    den = trace_form(B, W);
    if (den <= opts.denominator_floor)
      throw DegenerateProblem("trace-ratio denominator vanishes for every candidate projection");
  }

  TraceRatioResult out;
  out.ratio = trace_form(A, W) / den;
  out.initial_ratio = out.ratio;
  out.ratio_trace.push_back(out.ratio);

  for (int it = 0; it < opts.max_iter; ++it) {
    const Matrix candidate = sym_eig_smallest(A - out.ratio * B, m, tol).vectors;
    const double cden = trace_form(B, candidate);
    if (cden <= opts.denominator_floor) break;
    const double next = trace_form(A, candidate) / cden;
    if (!(out.ratio - next >= opts.tol)) break;
    W = candidate;
    out.ratio = next;
    out.ratio_trace.push_back(next);
  }
  out.W = std::move(W);
  return out;
}

struct MfaProjection {
  Projection projection;
  TraceRatioResult solve;
};

/// Orthonormal W minimizing within-neighbor scatter over between-neighbor scatter.
inline MfaProjection solve_projection_mfa(const DataMatrix& X, const SimilarityGraph& within,
                                          const SimilarityGraph& between, Index m,
                                          const TraceRatioOptions& opts = {}, const Tolerances& tol = {}) {
  if (m < 1 || m > X.features()) throw InvalidInput("target dimension must satisfy 1 <= m <= d");
  auto solve = trace_ratio_minimize(laplacian_scatter(X.values(), within), laplacian_scatter(X.values(), between),
                                    m, opts, tol);
  Projection W(solve.W, tol.orthonormality);
  return {std::move(W), std::move(solve)};
}

}  // namespace sgec
