#pragma once

#include "cobandit/clustering.hpp"
#include "cobandit/linalg.hpp"

namespace cobandit {

/// Column-stochastic M x M influence weights between user clusters.
/// Entries are nonnegative, every column sums to 1, and the diagonal is
/// always positive (self-influence is never cut).
class SimilarityMatrix {
 public:
  static SimilarityMatrix identity(std::size_t m);

  /// Validates column-stochasticity and nonnegativity; normalizes columns
  /// whose sums drift within 1e-9 of 1, rejects anything worse.
  static SimilarityMatrix from_matrix(Matrix entries, double sparsity_pct = 100.0);

  std::size_t size() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  double sparsity_pct() const { return sparsity_pct_; }

  Vec column(std::size_t i) const;

 private:
  SimilarityMatrix(Matrix entries, double sparsity_pct)
      : entries_(std::move(entries)), sparsity_pct_(sparsity_pct) {}

  Matrix entries_;
  double sparsity_pct_;
};

/// Clamped centroid dot products, column-normalized. Throws ZeroColumn when a
/// column vanishes after clamping.
SimilarityMatrix build_w(const ClusterModel& model);

/// Per column: keep the ceil(keep_pct/100 * m) largest entries (diagonal always
/// retained), zero the rest, renormalize. Ties at the threshold keep the lower
/// row index.
SimilarityMatrix sparsify(const SimilarityMatrix& w, double keep_pct);

}  // namespace cobandit
