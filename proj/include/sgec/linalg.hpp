#pragma once

#include <sgec/error.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <utility>

namespace sgec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical tolerances shared by the linear-algebra contracts.
struct Tolerances {
  double symmetry = 1e-10;        // max |M - M^T| accepted as symmetric
  double orthonormality = 1e-8;   // max |W^T W - I| accepted for a projection
  double sign_threshold = 1e-12;  // first component above this decides eigenvector sign
};

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) throw InvalidInput(std::string(what) + " contains non-finite entries");
}

inline double symmetry_defect(const Matrix& m) { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace detail

/// N x d sample matrix, one sample per row.
class DataMatrix {
 public:
  explicit DataMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 2) throw InvalidInput("data matrix needs at least 2 samples");
    if (values_.cols() < 1) throw InvalidInput("data matrix needs at least 1 feature");
    detail::require_finite(values_, "data matrix");
  }

  const Matrix& values() const noexcept { return values_; }
  Index samples() const noexcept { return values_.rows(); }
  Index features() const noexcept { return values_.cols(); }

 private:
  Matrix values_;
};

/// d x m projection with orthonormal columns.
class Projection {
 public:
  explicit Projection(Matrix values, double tol = Tolerances{}.orthonormality) : values_(std::move(values)) {
    if (values_.cols() < 1 || values_.cols() > values_.rows())
      throw InvalidInput("projection needs 1 <= m <= d");
    detail::require_finite(values_, "projection");
    const Matrix gram = values_.transpose() * values_;
    const double defect = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (defect > tol) throw InvalidInput("projection columns are not orthonormal");
  }

  const Matrix& values() const noexcept { return values_; }
  Index input_dim() const noexcept { return values_.rows(); }
  Index output_dim() const noexcept { return values_.cols(); }

 private:
  Matrix values_;
};

/// Symmetric N x N matrix of squared Euclidean distances with zero diagonal.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(Matrix values, double tol = Tolerances{}.symmetry) : values_(std::move(values)) {
    if (values_.rows() != values_.cols()) throw InvalidInput("distance matrix must be square");
    detail::require_finite(values_, "distance matrix");
    if (values_.size() == 0) return;
    if (detail::symmetry_defect(values_) > tol) throw InvalidInput("distance matrix is not symmetric");
    if (values_.diagonal().cwiseAbs().maxCoeff() > 0.0) throw InvalidInput("distance matrix diagonal must be zero");
    if (values_.minCoeff() < 0.0) throw InvalidInput("distance matrix has negative entries");
  }

  const Matrix& values() const noexcept { return values_; }
  Index size() const noexcept { return values_.rows(); }
  double operator()(Index i, Index j) const { return values_(i, j); }

 private:
  Matrix values_;
};

/// Squared Euclidean distances between the rows of Y.
///
/// Differences are accumulated per pair in a fixed order, so the result is exactly
/// symmetric with an exactly zero diagonal, and bitwise reproducible.
inline DistanceMatrix pairwise_sq_dist(const Matrix& Y) {
  detail::require_finite(Y, "embedded matrix");
  const Index n = Y.rows();
  const Matrix cols = Y.transpose();  // samples become contiguous columns
  Matrix out = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      const double d = (cols.col(i) - cols.col(j)).squaredNorm();
      out(i, j) = d;
      out(j, i) = d;
    }
  }
  return DistanceMatrix(std::move(out));
}

struct EigenPairs {
  Vector values;   // ascending
  Matrix vectors;  // one eigenvector per column
};

/// Flips each column so that its first component with magnitude above `threshold` is positive.
inline void normalize_signs(Matrix& vectors, double threshold = Tolerances{}.sign_threshold) {
  for (Index c = 0; c < vectors.cols(); ++c) {
    for (Index r = 0; r < vectors.rows(); ++r) {
      const double v = vectors(r, c);
      if (std::abs(v) > threshold) {
        if (v < 0.0) vectors.col(c) *= -1.0;
        break;
      }
    }
  }
}

/// The m smallest eigenpairs of a dense symmetric matrix.
///
/// Repeated eigenvalues yield an arbitrary orthonormal basis of the eigenspace; only
/// residuals and orthonormality are contractual in that case.
inline EigenPairs sym_eig_smallest(const Matrix& M, Index m, const Tolerances& tol = {}) {
  if (M.rows() != M.cols()) throw InvalidInput("eigenproblem matrix must be square");
  if (m < 1 || m > M.rows()) throw InvalidInput("eigenpair count must satisfy 1 <= m <= d");
  detail::require_finite(M, "eigenproblem matrix");
  if (detail::symmetry_defect(M) > tol.symmetry) throw InvalidInput("eigenproblem matrix is not symmetric");

  // Eigen reads only the lower triangle; symmetrize so both halves count.
  const Matrix sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericError("symmetric eigensolver did not converge");

  EigenPairs out{solver.eigenvalues().head(m), solver.eigenvectors().leftCols(m)};
  normalize_signs(out.vectors, tol.sign_threshold);
  return out;
}

}  // namespace sgec
