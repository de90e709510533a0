#pragma once

// Random generators and exhaustive enumerators shared by the test binaries.

#include <sgec/sgec.hpp>

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace sgec::testing {

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) M(i, j) = n(rng);
  return M;
}

inline Matrix random_symmetric(std::mt19937_64& rng, Index n) {
  const Matrix A = random_matrix(rng, n, n);
  return 0.5 * (A + A.transpose());
}

/// Random d x m matrix with orthonormal columns (QR of a Gaussian matrix).
inline Matrix random_orthonormal(std::mt19937_64& rng, Index d, Index m) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, d, d));
  return qr.householderQ() * Matrix::Identity(d, m);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Arbitrary labels in [0, c), possibly leaving clusters empty.
inline Assignment random_assignment(std::mt19937_64& rng, Index n, int c) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (auto& l : labels) l = uniform_int(rng, 0, c - 1);
  return Assignment(std::move(labels), c);
}

/// Random symmetric nonnegative similarity with zero diagonal and roughly `density` fill.
inline Matrix random_similarity(std::mt19937_64& rng, Index n, double density = 0.5) {
  Matrix S = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (uniform_real(rng, 0.0, 1.0) < density) S(i, j) = S(j, i) = uniform_real(rng, 0.0, 1.0);
  return S;
}

/// Calls `visit` with every labeling of n samples into c clusters (c^n of them).
inline void for_each_labeling(Index n, int c, const std::function<void(const Assignment&)>& visit) {
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (;;) {
    visit(Assignment(labels, c));
    std::size_t pos = 0;
    while (pos < labels.size() && ++labels[pos] == c) labels[pos++] = 0;
    if (pos == labels.size()) return;
  }
}

}  // namespace sgec::testing
