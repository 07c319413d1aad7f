#include "cobandit/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cobandit {

SimilarityMatrix SimilarityMatrix::identity(std::size_t m) {
  return SimilarityMatrix(Matrix::identity(m), 100.0);
}

SimilarityMatrix SimilarityMatrix::from_matrix(Matrix entries, double sparsity_pct) {
  if (entries.rows() != entries.cols() || entries.rows() == 0)
    throw DimensionMismatch("SimilarityMatrix: not square");
  const std::size_t m = entries.rows();
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(entries(i, j) >= 0.0))
        throw ConfigError("SimilarityMatrix: negative entry in column " + std::to_string(j));
      sum += entries(i, j);
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ConfigError("SimilarityMatrix: column " + std::to_string(j) +
                        " sums to " + std::to_string(sum));
    if (!(entries(j, j) > 0.0))
      throw ConfigError("SimilarityMatrix: zero diagonal in column " + std::to_string(j));
    for (std::size_t i = 0; i < m; ++i) entries(i, j) /= sum;
  }
  return SimilarityMatrix(std::move(entries), sparsity_pct);
}

Vec SimilarityMatrix::column(std::size_t i) const {
  if (i >= size()) throw DimensionMismatch("SimilarityMatrix::column: out of range");
  return entries_.col(i);
}

SimilarityMatrix build_w(const ClusterModel& model) {
  const std::size_t m = model.k();
  Matrix raw(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      raw(i, j) = std::max(0.0, dot(model.centroids.row(i), model.centroids.row(j)));
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += raw(i, j);
    if (sum <= 0.0)
      throw ZeroColumn("build_w: column " + std::to_string(j) + " is zero after clamping");
    for (std::size_t i = 0; i < m; ++i) raw(i, j) /= sum;
  }
  return SimilarityMatrix::from_matrix(std::move(raw), 100.0);
}

SimilarityMatrix sparsify(const SimilarityMatrix& w, double keep_pct) {
  if (!(keep_pct > 0.0 && keep_pct <= 100.0))
    throw ConfigError("sparsify: keep_pct must be in (0,100]");
  const std::size_t m = w.size();
  const std::size_t keep =
      std::min<std::size_t>(m, static_cast<std::size_t>(std::ceil(keep_pct / 100.0 * m)));
  Matrix out(m, m);
  std::vector<std::size_t> order(m);
  for (std::size_t j = 0; j < m; ++j) {
    const Vec col = w.column(j);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (col[a] != col[b]) return col[a] > col[b];
      return a < b;
    });
    double sum = 0.0;
    for (std::size_t r = 0; r < keep; ++r) {
      out(order[r], j) = col[order[r]];
      sum += col[order[r]];
    }
    if (out(j, j) == 0.0 && col[j] > 0.0) {  // force-retain the diagonal
      out(j, j) = col[j];
      sum += col[j];
    }
    for (std::size_t i = 0; i < m; ++i) out(i, j) /= sum;
  }
  return SimilarityMatrix::from_matrix(std::move(out), keep_pct);
}

}  // namespace cobandit
