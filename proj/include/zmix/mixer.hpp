#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "zmix/matrix.hpp"
#include "zmix/zeta.hpp"

namespace zmix {

/// Hard class labels in [0, k).
struct ClassLabels {
  std::vector<std::size_t> labels;
  std::size_t k = 0;

  /// Throws std::invalid_argument if any label is >= k.
  void validate() const;
  /// k = max(label) + 1.
  static ClassLabels infer(std::vector<std::size_t> labels);
};

SoftLabelMatrix one_hot(const ClassLabels& labels);

/// Result of an augmentation pass.
///
/// Output row p mixes input rows of its batch: batch b = p / batch_size covers input
/// rows [b * batch_size, min(n, (b + 1) * batch_size)), and weights_used(p, j) is the
/// weight of input row b * batch_size + j. For a single batch weights_used is the full
/// N x N row-stochastic matrix.
template <typename T>
struct AugmentedBatch {
  Matrix<T> features;
  SoftLabelMatrix soft_labels;
  WeightMatrix weights_used;
  std::size_t batch_size = 0;
};

struct MixedSample {
  std::vector<double> x;
  std::vector<double> y;
};

/// lambda * (x_i, y_i) + (1 - lambda) * (x_j, y_j).
MixedSample mixup_pair(std::span<const double> x_i, std::span<const double> x_j,
                       std::span<const double> y_i, std::span<const double> y_j, double lambda);

/// Draw from Beta(alpha, alpha) via two Gamma variates.
double sample_beta(double alpha, Rng& rng);

/// Random choices of one mixup pass: a single lambda and the partner of every row.
struct MixupDraw {
  double lambda = 0.5;
  std::vector<std::size_t> partner;
};

struct MixupOptions {
  double alpha = 1.0;
  /// Test hooks: override the sampled lambda / partner permutation.
  std::optional<double> fixed_lambda;
  std::optional<std::vector<std::size_t>> fixed_partner;
};

/// lambda ~ Beta(alpha, alpha), partner = uniform shuffle of 0..n-1.
MixupDraw draw_mixup(std::size_t n, const MixupOptions& options, Rng& rng);

/// Classic two-sample mixup over a batch. Requires n >= 2.
template <typename T>
AugmentedBatch<T> mixup_batch(const Matrix<T>& features, const SoftLabelMatrix& soft_labels,
                              const MixupOptions& options, Rng& rng);

/// Zeta-mixup: draws weight_matrix(n, gamma, rng) and mixes with it.
template <typename T>
AugmentedBatch<T> zeta_mixup_batch(const Matrix<T>& features, const SoftLabelMatrix& soft_labels,
                                   Gamma gamma, Rng& rng);

/// Zeta-mixup with a caller-supplied weight matrix (deterministic path).
template <typename T>
AugmentedBatch<T> zeta_mixup_with_weights(const Matrix<T>& features,
                                          const SoftLabelMatrix& soft_labels,
                                          const WeightMatrix& weights);

/// Allocation-free forms used by the benchmark; outputs must be pre-shaped.
template <typename T>
void zeta_mixup_into(const Matrix<T>& features, const SoftLabelMatrix& soft_labels,
                     const WeightMatrix& weights, Matrix<T>& out_features,
                     SoftLabelMatrix& out_labels);
template <typename T>
void mixup_into(const Matrix<T>& features, const SoftLabelMatrix& soft_labels,
                const MixupDraw& draw, Matrix<T>& out_features, SoftLabelMatrix& out_labels);

/// Applies `augment` to consecutive chunks of `batch_size` rows (the last chunk may be
/// shorter) and concatenates the results; weights_used becomes N x batch_size.
template <typename T>
using BatchAugmenter =
    std::function<AugmentedBatch<T>(const Matrix<T>&, const SoftLabelMatrix&)>;

template <typename T>
AugmentedBatch<T> augment_in_batches(const Matrix<T>& features, const SoftLabelMatrix& soft_labels,
                                     std::size_t batch_size, const BatchAugmenter<T>& augment);

/// Rows permuted so that row i of the result is row order[i] of the input.
template <typename T>
Matrix<T> gather_rows(const Matrix<T>& m, std::span<const std::size_t> order);

}  // namespace zmix
