#include "zmix/intrinsic_dim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <utility>

#include "json.hpp"

#include "zmix/eigen_sym.hpp"

namespace zmix::id {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double diff = a[c] - b[c];
    sum += diff * diff;
  }
  return sum;
}

bool all_rows_equal(const FeatureMatrix& m) {
  for (std::size_t r = 1; r < m.rows(); ++r) {
    if (!std::equal(m.row(r).begin(), m.row(r).end(), m.row(0).begin())) return false;
  }
  return true;
}

}  // namespace

NeighborTable knn(const FeatureMatrix& points, std::size_t k) {
  const std::size_t n = points.rows();
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (k >= n) {
    throw std::invalid_argument("k (" + std::to_string(k) + ") must be smaller than N (" +
                                std::to_string(n) + ")");
  }

  using Candidate = std::pair<double, std::size_t>;  // (distance^2, index), compared lexicographically
  NeighborTable table(n, k);
  std::vector<Candidate> heap;
  heap.reserve(k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    heap.clear();
    const auto query = points.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Candidate cand{squared_distance(query, points.row(j)), j};
      if (heap.size() < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end());
      } else if (cand < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    std::sort_heap(heap.begin(), heap.end());
    for (std::size_t r = 0; r < k; ++r) table(i, r) = heap[r].second;
  }
  return table;
}

std::size_t local_pca_id(const FeatureMatrix& neighborhood, double eigen_threshold) {
  const std::size_t m = neighborhood.rows();
  const std::size_t d = neighborhood.cols();
  if (m < 2) throw std::invalid_argument("neighborhood needs at least 2 points");
  if (!(eigen_threshold > 0.0 && eigen_threshold < 1.0)) {
    throw std::invalid_argument("eigen threshold must lie in (0, 1)");
  }
  if (all_rows_equal(neighborhood)) return 0;

  std::vector<double> mean(d, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < d; ++c) mean[c] += neighborhood(r, c);
  }
  for (auto& v : mean) v /= static_cast<double>(m);
  FeatureMatrix centered(m, d);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < d; ++c) centered(r, c) = neighborhood(r, c) - mean[c];
  }

  // Covariance (d x d) and Gram (m x m) share their nonzero spectrum; use the smaller.
  const double scale = 1.0 / static_cast<double>(m - 1);
  Matrix<double> cov;
  if (d <= m) {
    cov = Matrix<double>(d, d, 0.0);
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = a; b < d; ++b) {
        double s = 0.0;
        for (std::size_t r = 0; r < m; ++r) s += centered(r, a) * centered(r, b);
        cov(a, b) = s * scale;
      }
    }
  } else {
    cov = Matrix<double>(m, m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a; b < m; ++b) {
        double s = 0.0;
        for (std::size_t c = 0; c < d; ++c) s += centered(a, c) * centered(b, c);
        cov(a, b) = s * scale;
      }
    }
  }

  const auto eig = symmetric_eigenvalues(std::move(cov));
  const double largest = eig.front();
  if (!(largest > 0.0)) return 0;
  return static_cast<std::size_t>(
      std::count_if(eig.begin(), eig.end(), [&](double v) { return v > eigen_threshold * largest; }));
}

std::string IdSummary::to_json() const {
  nlohmann::ordered_json j;
  j["k"] = k;
  j["threshold"] = eigen_threshold;
  j["mean"] = mean;
  j["std"] = std;
  j["n_degenerate"] = n_degenerate;
  j["per_point"] = per_point;
  return j.dump();
}

IdSummary dataset_local_id(const FeatureMatrix& points, std::size_t k, double eigen_threshold) {
  const auto neighbors = knn(points, k);
  IdSummary summary;
  summary.k = k;
  summary.eigen_threshold = eigen_threshold;
  summary.per_point.resize(points.rows());

  FeatureMatrix hood(k + 1, points.cols());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    std::copy(points.row(i).begin(), points.row(i).end(), hood.row(0).begin());
    for (std::size_t r = 0; r < k; ++r) {
      const auto nb = points.row(neighbors(i, r));
      std::copy(nb.begin(), nb.end(), hood.row(r + 1).begin());
    }
    summary.per_point[i] = local_pca_id(hood, eigen_threshold);
  }

  double sum = 0.0;
  std::size_t count = 0;
  for (const auto v : summary.per_point) {
    if (v == 0) continue;
    sum += static_cast<double>(v);
    ++count;
  }
  summary.n_degenerate = points.rows() - count;
  if (count > 0) {
    summary.mean = sum / static_cast<double>(count);
    double sq = 0.0;
    for (const auto v : summary.per_point) {
      if (v == 0) continue;
      const double diff = static_cast<double>(v) - summary.mean;
      sq += diff * diff;
    }
    summary.std = std::sqrt(sq / static_cast<double>(count));
  }
  return summary;
}

}  // namespace zmix::id
