#include "cobandit/clustering.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <string>

namespace cobandit {

double sq_dist(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("sq_dist: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

namespace {

// k-means++: first seed uniform, later seeds proportional to squared distance
// from the nearest already-chosen seed.
std::vector<Vec> seed_plusplus(const std::vector<Vec>& points, std::size_t k,
                               std::mt19937_64& rng) {
  std::vector<Vec> centers;
  centers.reserve(k);
  std::uniform_int_distribution<std::size_t> first(0, points.size() - 1);
  centers.push_back(points[first(rng)]);

  std::vector<double> d2(points.size());
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec& c : centers) best = std::min(best, sq_dist(points[i], c));
      d2[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      double acc = 0.0;
      pick = points.size() - 1;
      for (std::size_t i = 0; i < points.size(); ++i) {
        acc += d2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    } else {
      // all points coincide with existing centers; any pick keeps Lloyd valid
      std::uniform_int_distribution<std::size_t> any(0, points.size() - 1);
      pick = any(rng);
    }
    centers.push_back(points[pick]);
  }
  return centers;
}

}  // namespace

ClusterModel fit_kmeans(const std::vector<Vec>& points, std::size_t k, std::uint64_t seed,
                        std::size_t max_iters, std::vector<double>* sse_trace) {
  if (points.empty()) throw TooFewPoints("fit_kmeans: no points");
  const std::size_t d = points[0].size();
  for (const Vec& p : points)
    if (p.size() != d) throw DimensionMismatch("fit_kmeans: inconsistent dimensions");

  std::set<Vec> distinct(points.begin(), points.end());
  if (k > distinct.size())
    throw TooFewPoints("fit_kmeans: k=" + std::to_string(k) + " exceeds " +
                       std::to_string(distinct.size()) + " distinct points");

  std::mt19937_64 rng(seed);
  std::vector<Vec> centers = seed_plusplus(points, k, rng);
  std::vector<std::size_t> assign(points.size(), k);

  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    double sse = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::size_t best = 0;
      double best_d = sq_dist(points[i], centers[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double dist = sq_dist(points[i], centers[c]);
        if (dist < best_d) {
          best_d = dist;
          best = c;
        }
      }
      sse += best_d;
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    if (sse_trace) sse_trace->push_back(sse);
    if (!changed && iter > 0) break;

    std::vector<Vec> sums(k, Vec(d, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      axpy(1.0, points[i], sums[assign[i]]);
      ++counts[assign[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // re-seed with the point farthest from its assigned centroid
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
          const double dist = sq_dist(points[i], centers[assign[i]]);
          if (dist > far_d) {
            far_d = dist;
            far = i;
          }
        }
        centers[c] = points[far];
        assign[far] = c;
      } else {
        for (std::size_t j = 0; j < d; ++j) centers[c][j] = sums[c][j] / counts[c];
      }
    }
  }

  ClusterModel model{Matrix(k, d)};
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t j = 0; j < d; ++j) model.centroids(c, j) = centers[c][j];
  return model;
}

std::size_t assign_cluster(const ClusterModel& model, const Vec& user_features) {
  if (user_features.size() != model.dim())
    throw DimensionMismatch("assign_cluster: feature dim mismatch");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < model.k(); ++c) {
    const double dist = sq_dist(user_features, model.centroids.row(c));
    if (dist < best_d) {
      best_d = dist;
      best = c;
    }
  }
  return best;
}

}  // namespace cobandit
