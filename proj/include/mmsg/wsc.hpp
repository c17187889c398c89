// Weighted spectral clustering baseline: embed the samples as rows of
// U * diag(sigma) from the compact SVD of the data matrix, then run Lloyd's
// k-means (k-means++ seeding, several restarts, keep the lowest
// within-cluster sum of squares) and emit hard one-hot memberships.
#pragma once

#include <limits>
#include <vector>

#include "mmsg/linalg.hpp"
#include "mmsg/model.hpp"
#include "mmsg/rng.hpp"

namespace mmsg {

struct KMeansResult {
  std::vector<int> labels;
  Matrix centroids;  // K x d
  double wcss = 0.0;
};

namespace detail {

inline std::vector<int> assign_points(const Matrix& points, const Matrix& centroids) {
  const Index n = points.rows(), k = centroids.rows();
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < k; ++c) {
      const double d2 = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d2 < best) {
        best = d2;
        labels[static_cast<std::size_t>(i)] = static_cast<int>(c);
      }
    }
  }
  return labels;
}

inline KMeansResult kmeans_single(const Matrix& points, Index k, Rng& rng, int max_iter) {
  const Index n = points.rows(), d = points.cols();
  Matrix centroids(k, d);

  // k-means++ seeding.
  centroids.row(0) = points.row(static_cast<Index>(rng.index(static_cast<std::size_t>(n))));
  Vector dist2 = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (Index c = 1; c < k; ++c) {
    const double total = dist2.sum();
    Index pick = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total, acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        acc += dist2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(rng.index(static_cast<std::size_t>(n)));
    }
    centroids.row(c) = points.row(pick);
    dist2 = dist2.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }

  std::vector<int> labels = assign_points(points, centroids);
  for (int iter = 0; iter < max_iter; ++iter) {
    centroids.setZero();
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      centroids.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
      ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
    }
    for (Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centroids.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        // Empty cluster: reseed at the point farthest from its own centroid.
        Index far = 0;
        double far_d2 = -1.0;
        for (Index i = 0; i < n; ++i) {
          const double d2 =
              (points.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
          if (d2 > far_d2) {
            far_d2 = d2;
            far = i;
          }
        }
        centroids.row(c) = points.row(far);
      }
    }
    std::vector<int> next = assign_points(points, centroids);
    const bool stable = next == labels;
    labels = std::move(next);
    if (stable) break;
  }

  double wcss = 0.0;
  for (Index i = 0; i < n; ++i)
    wcss += (points.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  return {std::move(labels), std::move(centroids), wcss};
}

}  // namespace detail

inline KMeansResult kmeans(const Matrix& points, Index k, int restarts, Rng& rng,
                           int max_iter = 100) {
  if (k < 1 || k > points.rows()) throw InvalidConfigError("kmeans: need 1 <= K <= points");
  if (restarts < 1) throw InvalidConfigError("kmeans: need at least one restart");
  KMeansResult best;
  best.wcss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    KMeansResult run = detail::kmeans_single(points, k, rng, max_iter);
    if (run.wcss < best.wcss) best = std::move(run);
  }
  return best;
}

struct HardClustering {
  std::vector<int> labels;  // values in [0, K)
  MembershipMatrix one_hot;
};

inline HardClustering wsc(const Matrix& x, Index k, int restarts, Rng& rng) {
  const Index n = x.cols(), p = x.rows();
  if (k < 1 || k > std::min(n, p)) throw InvalidConfigError("wsc: need 1 <= K <= min(p, n)");
  require_finite(x, "x");

  SvdResult svd = svd_compact(x, k);
  Matrix embedding = svd.v * svd.s.asDiagonal();  // n x K, singular-value weighted
  KMeansResult km = kmeans(embedding, k, restarts, rng);

  Matrix one_hot = Matrix::Zero(n, k);
  for (Index i = 0; i < n; ++i) one_hot(i, km.labels[static_cast<std::size_t>(i)]) = 1.0;
  return {std::move(km.labels), MembershipMatrix(std::move(one_hot))};
}

}  // namespace mmsg
