#pragma once

#include <cstdint>
#include <vector>

#include "cobandit/linalg.hpp"

namespace cobandit {

/// k centroids over user features, one row each. Immutable after fit.
struct ClusterModel {
  Matrix centroids;  // k x d_u

  std::size_t k() const { return centroids.rows(); }
  std::size_t dim() const { return centroids.cols(); }
};

/// Lloyd's algorithm with k-means++ seeding. Deterministic given
/// (points order, k, seed, max_iters). Empty clusters are re-seeded with the
/// point farthest from its assigned centroid. Throws TooFewPoints when k
/// exceeds the number of distinct points.
ClusterModel fit_kmeans(const std::vector<Vec>& points, std::size_t k, std::uint64_t seed,
                        std::size_t max_iters = 100, std::vector<double>* sse_trace = nullptr);

/// Nearest centroid by squared Euclidean distance; ties go to the lowest index.
std::size_t assign_cluster(const ClusterModel& model, const Vec& user_features);

double sq_dist(const Vec& a, const Vec& b);

}  // namespace cobandit
