#include "zmix/mixer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "zmix/kernels.hpp"

namespace zmix {

namespace {

template <typename T>
void check_batch(const Matrix<T>& features, const SoftLabelMatrix& soft_labels) {
  if (features.rows() != soft_labels.rows()) {
    throw std::invalid_argument("feature rows (" + std::to_string(features.rows()) +
                                ") and label rows (" + std::to_string(soft_labels.rows()) +
                                ") differ");
  }
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (!std::isfinite(features.data()[i])) throw std::invalid_argument("non-finite feature");
  }
  for (std::size_t r = 0; r < soft_labels.rows(); ++r) {
    double sum = 0.0;
    for (const double v : soft_labels.row(r)) {
      if (!(v >= 0.0)) throw std::invalid_argument("soft label entries must be >= 0");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("soft label row " + std::to_string(r) + " does not sum to 1");
    }
  }
}

}  // namespace

void ClassLabels::validate() const {
  for (const auto label : labels) {
    if (label >= k) {
      throw std::invalid_argument("label " + std::to_string(label) + " outside [0, " +
                                  std::to_string(k) + ")");
    }
  }
}

ClassLabels ClassLabels::infer(std::vector<std::size_t> labels) {
  const std::size_t k =
      labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  return ClassLabels{std::move(labels), k};
}

SoftLabelMatrix one_hot(const ClassLabels& labels) {
  labels.validate();
  SoftLabelMatrix out(labels.labels.size(), labels.k, 0.0);
  for (std::size_t i = 0; i < labels.labels.size(); ++i) out(i, labels.labels[i]) = 1.0;
  return out;
}

MixedSample mixup_pair(std::span<const double> x_i, std::span<const double> x_j,
                       std::span<const double> y_i, std::span<const double> y_j, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (x_i.size() != x_j.size() || y_i.size() != y_j.size()) {
    throw std::invalid_argument("mixup operands differ in length");
  }
  MixedSample out{std::vector<double>(x_i.size()), std::vector<double>(y_i.size())};
  const double rest = 1.0 - lambda;
  for (std::size_t c = 0; c < x_i.size(); ++c) out.x[c] = lambda * x_i[c] + rest * x_j[c];
  for (std::size_t c = 0; c < y_i.size(); ++c) out.y[c] = lambda * y_i[c] + rest * y_j[c];
  return out;
}

double sample_beta(double alpha, Rng& rng) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be > 0");
  std::gamma_distribution<double> g(alpha, 1.0);
  const double a = g(rng);
  const double b = g(rng);
  // Both variates underflow to zero only for tiny alpha; fall back to a fair coin.
  if (a + b == 0.0) return std::bernoulli_distribution(0.5)(rng) ? 1.0 : 0.0;
  return a / (a + b);
}

MixupDraw draw_mixup(std::size_t n, const MixupOptions& options, Rng& rng) {
  MixupDraw draw;
  draw.lambda = options.fixed_lambda ? *options.fixed_lambda : sample_beta(options.alpha, rng);
  if (!(draw.lambda >= 0.0 && draw.lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
  if (options.fixed_partner) {
    draw.partner = *options.fixed_partner;
    if (draw.partner.size() != n) throw std::invalid_argument("one partner per row required");
  } else {
    const auto ordering = sample_ordering(n, rng);
    draw.partner.resize(n);
    for (std::size_t p = 0; p < n; ++p) draw.partner[p] = ordering.ranks()[p] - 1;
  }
  return draw;
}

template <typename T>
void mixup_into(const Matrix<T>& features, const SoftLabelMatrix& soft_labels,
                const MixupDraw& draw, Matrix<T>& out_features, SoftLabelMatrix& out_labels) {
  kernels::pair_rows(features, draw.partner, draw.lambda, out_features);
  kernels::pair_rows(soft_labels, draw.partner, draw.lambda, out_labels);
}

template <typename T>
AugmentedBatch<T> mixup_batch(const Matrix<T>& features, const SoftLabelMatrix& soft_labels,
                              const MixupOptions& options, Rng& rng) {
  const std::size_t n = features.rows();
  if (n < 2) throw std::invalid_argument("mixup needs at least 2 samples");
  check_batch(features, soft_labels);

  const auto draw = draw_mixup(n, options, rng);
  AugmentedBatch<T> out{Matrix<T>(n, features.cols()),
                        SoftLabelMatrix(n, soft_labels.cols()), WeightMatrix(n, n, 0.0), n};
  mixup_into(features, soft_labels, draw, out.features, out.soft_labels);
  for (std::size_t p = 0; p < n; ++p) {
    out.weights_used(p, p) += draw.lambda;
    out.weights_used(p, draw.partner[p]) += 1.0 - draw.lambda;
  }
  return out;
}

template <typename T>
void zeta_mixup_into(const Matrix<T>& features, const SoftLabelMatrix& soft_labels,
                     const WeightMatrix& weights, Matrix<T>& out_features,
                     SoftLabelMatrix& out_labels) {
  kernels::weighted_rows(weights, features, out_features);
  kernels::weighted_rows(weights, soft_labels, out_labels);
}

template <typename T>
AugmentedBatch<T> zeta_mixup_with_weights(const Matrix<T>& features,
                                          const SoftLabelMatrix& soft_labels,
                                          const WeightMatrix& weights) {
  const std::size_t n = features.rows();
  if (n == 0) throw std::invalid_argument("zeta-mixup needs at least 1 sample");
  check_batch(features, soft_labels);
  if (weights.rows() != n || weights.cols() != n) {
    throw std::invalid_argument("weight matrix must be " + std::to_string(n) + "x" +
                                std::to_string(n));
  }
  AugmentedBatch<T> out{Matrix<T>(n, features.cols()), SoftLabelMatrix(n, soft_labels.cols()),
                        weights, n};
  zeta_mixup_into(features, soft_labels, weights, out.features, out.soft_labels);
  return out;
}

template <typename T>
AugmentedBatch<T> zeta_mixup_batch(const Matrix<T>& features, const SoftLabelMatrix& soft_labels,
                                   Gamma gamma, Rng& rng) {
  if (features.rows() == 0) throw std::invalid_argument("zeta-mixup needs at least 1 sample");
  return zeta_mixup_with_weights(features, soft_labels,
                                 weight_matrix(features.rows(), gamma, rng));
}

template <typename T>
Matrix<T> gather_rows(const Matrix<T>& m, std::span<const std::size_t> order) {
  Matrix<T> out(order.size(), m.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= m.rows()) throw std::invalid_argument("row index out of range");
    std::copy(m.row(order[i]).begin(), m.row(order[i]).end(), out.row(i).begin());
  }
  return out;
}

template <typename T>
AugmentedBatch<T> augment_in_batches(const Matrix<T>& features, const SoftLabelMatrix& soft_labels,
                                     std::size_t batch_size, const BatchAugmenter<T>& augment) {
  const std::size_t n = features.rows();
  if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
  if (soft_labels.rows() != n) throw std::invalid_argument("feature and label rows differ");
  batch_size = std::min(batch_size, n);

  AugmentedBatch<T> out{Matrix<T>(n, features.cols()), SoftLabelMatrix(n, soft_labels.cols()),
                        WeightMatrix(n, batch_size, 0.0), batch_size};
  std::vector<std::size_t> rows;
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t len = std::min(batch_size, n - start);
    rows.resize(len);
    std::iota(rows.begin(), rows.end(), start);
    const auto part = augment(gather_rows(features, rows), gather_rows(soft_labels, rows));
    if (part.features.rows() != len || part.weights_used.cols() != len) {
      throw std::logic_error("batch augmenter changed the batch size");
    }
    for (std::size_t p = 0; p < len; ++p) {
      std::copy(part.features.row(p).begin(), part.features.row(p).end(),
                out.features.row(start + p).begin());
      std::copy(part.soft_labels.row(p).begin(), part.soft_labels.row(p).end(),
                out.soft_labels.row(start + p).begin());
      std::copy(part.weights_used.row(p).begin(), part.weights_used.row(p).end(),
                out.weights_used.row(start + p).begin());
    }
  }
  return out;
}

#define ZMIX_INSTANTIATE(T)                                                                     \
  template AugmentedBatch<T> mixup_batch<T>(const Matrix<T>&, const SoftLabelMatrix&,           \
                                            const MixupOptions&, Rng&);                         \
  template AugmentedBatch<T> zeta_mixup_batch<T>(const Matrix<T>&, const SoftLabelMatrix&,      \
                                                 Gamma, Rng&);                                  \
  template AugmentedBatch<T> zeta_mixup_with_weights<T>(const Matrix<T>&,                       \
                                                        const SoftLabelMatrix&,                 \
                                                        const WeightMatrix&);                   \
  template void zeta_mixup_into<T>(const Matrix<T>&, const SoftLabelMatrix&,                    \
                                   const WeightMatrix&, Matrix<T>&, SoftLabelMatrix&);          \
  template void mixup_into<T>(const Matrix<T>&, const SoftLabelMatrix&, const MixupDraw&,       \
                              Matrix<T>&, SoftLabelMatrix&);                                    \
  template AugmentedBatch<T> augment_in_batches<T>(const Matrix<T>&, const SoftLabelMatrix&,    \
                                                   std::size_t, const BatchAugmenter<T>&);      \
  template Matrix<T> gather_rows<T>(const Matrix<T>&, std::span<const std::size_t>);

ZMIX_INSTANTIATE(float)
ZMIX_INSTANTIATE(double)

#undef ZMIX_INSTANTIATE

}  // namespace zmix
