#include "zmix/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace zmix {

namespace {

// Normalized p-series terms; element r-1 is the weight of rank r.
std::vector<double> normalized_pseries(double gamma, std::size_t n) {
  const double norm = truncated_zeta(gamma, n);
  std::vector<double> terms(n);
  for (std::size_t r = 1; r <= n; ++r) {
    terms[r - 1] = std::pow(static_cast<double>(r), -gamma) / norm;
  }
  return terms;
}

}  // namespace

Gamma::Gamma(double value) : value_(value) {
  if (!std::isfinite(value)) throw std::invalid_argument("gamma must be finite");
}

Ordering Ordering::from_ranks(std::vector<std::uint32_t> ranks) {
  std::vector<bool> seen(ranks.size() + 1, false);
  for (const auto r : ranks) {
    if (r == 0 || r > ranks.size() || seen[r]) {
      throw std::invalid_argument("ranks are not a permutation of 1.." +
                                  std::to_string(ranks.size()));
    }
    seen[r] = true;
  }
  return Ordering(std::move(ranks));
}

Ordering Ordering::identity(std::size_t n) {
  std::vector<std::uint32_t> ranks(n);
  for (std::size_t i = 0; i < n; ++i) ranks[i] = static_cast<std::uint32_t>(i + 1);
  return Ordering(std::move(ranks));
}

double truncated_zeta(double gamma, std::size_t n) {
  if (!std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite");
  if (n == 0) throw std::invalid_argument("truncated_zeta needs n >= 1");
  double sum = 0.0;
  for (std::size_t j = n; j >= 1; --j) sum += std::pow(static_cast<double>(j), -gamma);
  return sum;
}

double zeta_tail_corrected(double gamma, std::size_t terms) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("zeta_tail_corrected needs finite gamma > 1");
  }
  const double j = static_cast<double>(terms);
  return truncated_zeta(gamma, terms) + std::pow(j, 1.0 - gamma) / (gamma - 1.0);
}

double solve_gamma_min(double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  // zeta is strictly decreasing on (1, inf): zeta(lo) > 2 > zeta(hi).
  double lo = 1.01;
  double hi = 3.0;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (zeta_tail_corrected(mid) > 2.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Ordering sample_ordering(std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("ordering needs n >= 1");
  std::vector<std::uint32_t> ranks(n);
  std::iota(ranks.begin(), ranks.end(), 1U);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(ranks[i], ranks[pick(rng)]);
  }
  return Ordering::from_ranks(std::move(ranks));
}

std::vector<double> zeta_weights(Gamma gamma, const Ordering& ordering) {
  const auto terms = normalized_pseries(gamma.value(), ordering.size());
  std::vector<double> w(ordering.size());
  const auto ranks = ordering.ranks();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = terms[ranks[i] - 1];
  return w;
}

Gamma gamma_from_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw std::invalid_argument("lambda must lie in (0, 1)");
  }
  return Gamma(std::log2(lambda / (1.0 - lambda)));
}

WeightMatrix weight_matrix(std::size_t n, Gamma gamma, Rng& rng) {
  if (n == 0) throw std::invalid_argument("weight matrix needs n >= 1");
  const auto terms = normalized_pseries(gamma.value(), n);
  WeightMatrix w(n, n);
  for (std::size_t p = 0; p < n; ++p) {
    const auto ordering = sample_ordering(n, rng);
    const auto ranks = ordering.ranks();
    auto row = w.row(p);
    for (std::size_t i = 0; i < n; ++i) row[i] = terms[ranks[i] - 1];
  }
  return w;
}

}  // namespace zmix
