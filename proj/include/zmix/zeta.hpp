#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "zmix/matrix.hpp"

namespace zmix {

/// Random source used by every stochastic operation. Callers own and seed it.
using Rng = std::mt19937_64;

/// Smallest exponent for which the top-ranked weight outweighs all others combined,
/// for every batch size. Root of zeta(gamma) = 2, rounded to five decimals.
inline constexpr double kGammaMin = 1.72865;

/// Exponent of the p-series weighting. Any finite value is accepted; values below
/// kGammaMin lose the dominance guarantee and are reported by `dominant()`.
class Gamma {
 public:
  explicit Gamma(double value);

  double value() const noexcept { return value_; }
  bool dominant() const noexcept { return value_ >= kGammaMin; }

 private:
  double value_;
};

/// A permutation of the ranks 1..N; `ranks()[i]` is the rank assigned to sample i.
class Ordering {
 public:
  /// Throws std::invalid_argument unless `ranks` is a permutation of 1..N.
  static Ordering from_ranks(std::vector<std::uint32_t> ranks);
  static Ordering identity(std::size_t n);

  std::size_t size() const noexcept { return ranks_.size(); }
  std::span<const std::uint32_t> ranks() const noexcept { return ranks_; }

 private:
  explicit Ordering(std::vector<std::uint32_t> ranks) : ranks_(std::move(ranks)) {}
  std::vector<std::uint32_t> ranks_;
};

/// N-by-N row-stochastic matrix; row p holds the weights of output sample p.
using WeightMatrix = Matrix<double>;

/// sum_{j=1}^{n} j^{-gamma}. Summed from the smallest term up.
double truncated_zeta(double gamma, std::size_t n);

/// Riemann zeta for gamma > 1: `terms` explicit terms plus the integral tail
/// terms^{1-gamma} / (gamma - 1).
double zeta_tail_corrected(double gamma, std::size_t terms = 1'000'000);

/// Bisection for zeta(gamma) = 2 on [1.01, 3.0]. Stops once the bracket is
/// narrower than `tolerance`.
double solve_gamma_min(double tolerance);

/// Uniform random permutation of 1..n (Fisher-Yates).
Ordering sample_ordering(std::size_t n, Rng& rng);

/// w_i = ranks_i^{-gamma} / truncated_zeta(gamma, N).
std::vector<double> zeta_weights(Gamma gamma, const Ordering& ordering);

/// Inverse of the two-sample weight map: the gamma whose first weight equals lambda.
Gamma gamma_from_lambda(double lambda);

/// n rows, each the zeta weights of an independently drawn ordering.
WeightMatrix weight_matrix(std::size_t n, Gamma gamma, Rng& rng);

}  // namespace zmix
