#pragma once

#include <sgec/graph.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

namespace sgec {

/// Ground-truth classes remapped to contiguous ids 0..classes-1 (in ascending order of the raw ids).
class LabelVector {
 public:
  explicit LabelVector(const std::vector<long long>& raw) {
    std::map<long long, int> ids;
    for (long long r : raw) ids.emplace(r, 0);
    int next = 0;
    for (auto& [key, id] : ids) id = next++;
    values_.reserve(raw.size());
    for (long long r : raw) values_.push_back(ids.at(r));
    classes_ = next;
  }

  Index size() const noexcept { return static_cast<Index>(values_.size()); }
  int classes() const noexcept { return classes_; }
  int operator[](Index i) const { return values_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& values() const noexcept { return values_; }

 private:
  std::vector<int> values_;
  int classes_ = 0;
};

/// Contingency counts: rows are predicted clusters, columns are classes.
inline Matrix confusion_matrix(const Assignment& pred, const LabelVector& truth) {
  if (pred.samples() != truth.size()) throw InvalidInput("prediction and truth lengths differ");
  Matrix C = Matrix::Zero(pred.clusters(), truth.classes());
  for (Index i = 0; i < pred.samples(); ++i) C(pred.label(i), truth[i]) += 1.0;
  return C;
}

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method with potentials).
/// Returns, for each row, its matched column.
inline std::vector<Index> min_cost_matching(const Matrix& cost) {
  const Index n = cost.rows();
  if (cost.cols() != n) throw InvalidInput("matching cost must be square");
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; column 0 is a virtual source.
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<Index> match(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);
  for (Index row = 1; row <= n; ++row) {
    match[0] = row;
    Index col0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(col0)] = 1;
      const Index r0 = match[static_cast<std::size_t>(col0)];
      double delta = inf;
      Index col1 = 0;
      for (Index j = 1; j <= n; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) continue;
        const double cur = cost(r0 - 1, j - 1) - u[static_cast<std::size_t>(r0)] - v[sj];
        if (cur < minv[sj]) {
          minv[sj] = cur;
          way[sj] = col0;
        }
        if (minv[sj] < delta) {
          delta = minv[sj];
          col1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) {
          u[static_cast<std::size_t>(match[sj])] += delta;
          v[sj] -= delta;
        } else {
          minv[sj] -= delta;
        }
      }
      col0 = col1;
    } while (match[static_cast<std::size_t>(col0)] != 0);
    do {
      const Index col1 = way[static_cast<std::size_t>(col0)];
      match[static_cast<std::size_t>(col0)] = match[static_cast<std::size_t>(col1)];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<Index> assignment(static_cast<std::size_t>(n), 0);
  for (Index j = 1; j <= n; ++j) assignment[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return assignment;
}

/// Fraction of samples covered by the best one-to-one cluster-to-class matching.
/// A rectangular confusion matrix is zero-padded to square.
inline double accuracy(const Assignment& pred, const LabelVector& truth) {
  const Matrix C = confusion_matrix(pred, truth);
  const Index n = std::max(C.rows(), C.cols());
  if (n == 0 || pred.samples() == 0) return 0.0;
  Matrix padded = Matrix::Zero(n, n);
  padded.topLeftCorner(C.rows(), C.cols()) = C;
  const auto match = min_cost_matching(-padded);
  double hit = 0.0;
  for (Index r = 0; r < n; ++r) hit += padded(r, match[static_cast<std::size_t>(r)]);
  return hit / static_cast<double>(pred.samples());
}

namespace detail {

inline double entropy(const Vector& counts, double total) {
  double h = 0.0;
  for (Index i = 0; i < counts.size(); ++i)
    if (counts(i) > 0.0) {
      const double p = counts(i) / total;
      h -= p * std::log(p);
    }
  return h;
}

}  // namespace detail

/// Mutual information normalized by sqrt(H(pred) H(truth)), natural log.
///
/// When an entropy vanishes: 1 if both partitions are a single block, else 0.
inline double nmi(const Assignment& pred, const LabelVector& truth) {
  const Matrix C = confusion_matrix(pred, truth);
  const double total = static_cast<double>(pred.samples());
  if (total == 0.0) return 0.0;
  const Vector rows = C.rowwise().sum(), cols = C.colwise().sum().transpose();
  const double hp = detail::entropy(rows, total), ht = detail::entropy(cols, total);
  if (hp <= 0.0 || ht <= 0.0) return (hp <= 0.0 && ht <= 0.0) ? 1.0 : 0.0;
  double mi = 0.0;
  for (Index r = 0; r < C.rows(); ++r)
    for (Index c = 0; c < C.cols(); ++c)
      if (C(r, c) > 0.0) mi += C(r, c) / total * std::log(total * C(r, c) / (rows(r) * cols(c)));
  return std::clamp(mi / std::sqrt(hp * ht), 0.0, 1.0);
}

/// (1/N) sum over clusters of the largest class overlap.
inline double purity(const Assignment& pred, const LabelVector& truth) {
  const Matrix C = confusion_matrix(pred, truth);
  if (pred.samples() == 0 || C.cols() == 0) return 0.0;
  return C.rowwise().maxCoeff().sum() / static_cast<double>(pred.samples());
}

struct Metrics {
  double acc = 0.0;
  double nmi = 0.0;
  double purity = 0.0;
};

inline Metrics evaluate(const Assignment& pred, const LabelVector& truth) {
  return {accuracy(pred, truth), nmi(pred, truth), purity(pred, truth)};
}

/// Relabels arbitrary integer predictions into an Assignment with contiguous cluster ids.
inline Assignment assignment_from_labels(const std::vector<long long>& raw) {
  const LabelVector remapped(raw);
  return Assignment(remapped.values(), std::max(1, remapped.classes()));
}

}  // namespace sgec
