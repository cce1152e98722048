#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "zmix/matrix.hpp"

namespace zmix::id {

/// Row i lists the k nearest neighbors of point i (itself excluded), nearest first.
using NeighborTable = Matrix<std::size_t>;

/// Exact brute-force k nearest neighbors by Euclidean distance. Equal distances are
/// ordered by lower index. Throws std::invalid_argument if k == 0 or k >= N.
NeighborTable knn(const FeatureMatrix& points, std::size_t k);

/// Local PCA estimate: number of covariance eigenvalues greater than
/// eigen_threshold * largest eigenvalue. Returns 0 when all points coincide.
std::size_t local_pca_id(const FeatureMatrix& neighborhood, double eigen_threshold);

struct IdSummary {
  std::vector<std::size_t> per_point;  // 0 marks a degenerate neighborhood
  double mean = 0.0;                   // over non-degenerate points
  double std = 0.0;                    // population std over non-degenerate points
  std::size_t k = 0;
  double eigen_threshold = 0.0;
  std::size_t n_degenerate = 0;

  /// {k, threshold, mean, std, n_degenerate, per_point}
  std::string to_json() const;
};

/// Local ID of every point over the neighborhood {point} + its k nearest neighbors.
IdSummary dataset_local_id(const FeatureMatrix& points, std::size_t k,
                           double eigen_threshold = 0.05);

}  // namespace zmix::id
