#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "zmix/zeta.hpp"

using namespace zmix;

namespace {

// High-precision reference values (50-digit arithmetic, rounded to double).
constexpr double kZetaAt1p5 = 2.6123753486854883;
constexpr double kZetaRoot = 1.7286472389981836;

std::vector<double> weights_for(double gamma, std::vector<std::uint32_t> ranks) {
  return zeta_weights(Gamma(gamma), Ordering::from_ranks(std::move(ranks)));
}

}  // namespace

TEST_CASE("truncated zeta sums") {
  CHECK(truncated_zeta(1.0, 2) == doctest::Approx(1.5).epsilon(1e-15));
  for (const double g : {-3.0, 0.0, 1.0, 2.8, 40.0}) CHECK(truncated_zeta(g, 1) == 1.0);
  CHECK(truncated_zeta(2.0, 3) == doctest::Approx(49.0 / 36.0).epsilon(1e-15));
  CHECK(truncated_zeta(0.0, 17) == 17.0);
  CHECK_THROWS_AS(truncated_zeta(std::nan(""), 3), std::invalid_argument);
  CHECK_THROWS_AS(truncated_zeta(INFINITY, 3), std::invalid_argument);
  CHECK_THROWS_AS(truncated_zeta(2.0, 0), std::invalid_argument);
}

TEST_CASE("tail-corrected zeta against independent references") {
  CHECK(std::abs(zeta_tail_corrected(1.5) - kZetaAt1p5) < 1e-8);
  CHECK(std::abs(zeta_tail_corrected(2.0) - std::numbers::pi * std::numbers::pi / 6.0) < 1e-9);
  for (const double s : {1.3, 1.72865, 2.5, 4.0}) {
    CHECK(std::abs(zeta_tail_corrected(s) - oracle::zeta_euler_maclaurin(s)) < 1e-8);
  }
  CHECK(zeta_tail_corrected(1.5) > 2.0);
  CHECK(zeta_tail_corrected(2.0) < 2.0);
}

TEST_CASE("gamma_min root") {
  const double root = solve_gamma_min(1e-5);
  CHECK(std::abs(root - 1.72865) <= 1e-4);
  CHECK(std::abs(root - kZetaRoot) <= 1e-5);
  CHECK(std::abs(zeta_tail_corrected(root) - 2.0) <= 10 * 1e-5);

  const double fine = solve_gamma_min(1e-12);
  CHECK(std::abs(fine - kZetaRoot) < 1e-9);
  CHECK(std::abs(kGammaMin - kZetaRoot) < 5e-6);

  CHECK_THROWS_AS(solve_gamma_min(0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_gamma_min(-1.0), std::invalid_argument);
}

TEST_CASE("orderings") {
  Rng rng(11);
  CHECK(std::ranges::equal(sample_ordering(1, rng).ranks(), std::array<std::uint32_t, 1>{1}));
  CHECK_THROWS_AS(sample_ordering(0, rng), std::invalid_argument);

  Rng a(99), b(99);
  const auto oa = sample_ordering(2, a);
  const auto ob = sample_ordering(2, b);
  CHECK(std::ranges::equal(oa.ranks(), ob.ranks()));

  CHECK_THROWS_AS(Ordering::from_ranks({1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Ordering::from_ranks({0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Ordering::from_ranks({1, 3}), std::invalid_argument);
  CHECK_NOTHROW(Ordering::from_ranks({3, 1, 2}));
  CHECK(std::ranges::equal(Ordering::identity(3).ranks(), std::array<std::uint32_t, 3>{1, 2, 3}));
}

TEST_CASE("orderings of three are uniform") {
  Rng rng(2024);
  constexpr int kDraws = 60000;
  std::map<std::vector<std::uint32_t>, int> counts;
  for (int t = 0; t < kDraws; ++t) {
    const auto o = sample_ordering(3, rng);
    counts[{o.ranks().begin(), o.ranks().end()}]++;
  }
  REQUIRE(counts.size() == 6);
  double chi2 = 0.0;
  for (const auto& [perm, c] : counts) {
    const double freq = static_cast<double>(c) / kDraws;
    CHECK(std::abs(freq - 1.0 / 6.0) <= 0.01);
    const double expected = kDraws / 6.0;
    chi2 += (c - expected) * (c - expected) / expected;
  }
  // 5 degrees of freedom, 99.9th percentile.
  CHECK(chi2 < 20.52);
}

TEST_CASE("zeta weights examples") {
  auto w = weights_for(1.0, {1, 2});
  CHECK(w[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(w[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  w = weights_for(0.0, {2, 1});
  CHECK(w[0] == 0.5);
  CHECK(w[1] == 0.5);

  w = weights_for(2.0, {1, 2, 3});
  CHECK(std::abs(w[0] - 36.0 / 49.0) < 1e-15);
  CHECK(std::abs(w[1] - 9.0 / 49.0) < 1e-15);
  CHECK(std::abs(w[2] - 4.0 / 49.0) < 1e-15);
}

TEST_CASE("gamma from lambda") {
  CHECK(gamma_from_lambda(0.5).value() == 0.0);
  CHECK(gamma_from_lambda(2.0 / 3.0).value() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_from_lambda(0.8).value() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(gamma_from_lambda(0.7).value() - 1.2223924213364480) < 1e-14);
  CHECK(gamma_from_lambda(0.3).value() < 0.0);
  CHECK_FALSE(gamma_from_lambda(0.3).dominant());
  for (const double bad : {0.0, 1.0, -0.1, 1.5, std::nan("")}) {
    CHECK_THROWS_AS(gamma_from_lambda(bad), std::invalid_argument);
  }
}

TEST_CASE("gamma value type") {
  CHECK_THROWS_AS(Gamma(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(Gamma(-INFINITY), std::invalid_argument);
  CHECK(Gamma(2.8).dominant());
  CHECK(Gamma(kGammaMin).dominant());
  CHECK_FALSE(Gamma(1.0).dominant());
}

TEST_CASE("weight matrix examples") {
  Rng rng(7);
  const auto one = weight_matrix(1, Gamma(3.0), rng);
  REQUIRE(one.rows() == 1);
  CHECK(one(0, 0) == 1.0);

  const auto w = weight_matrix(32, Gamma(2.8), rng);
  REQUIRE(w.rows() == 32);
  REQUIRE(w.cols() == 32);
  for (std::size_t p = 0; p < 32; ++p) {
    const auto row = w.row(p);
    CHECK(std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) <= 1e-9);
  }

  Rng rng2(5);
  const auto pair = weight_matrix(2, Gamma(1.0), rng2);
  for (std::size_t p = 0; p < 2; ++p) {
    const bool first = std::abs(pair(p, 0) - 2.0 / 3.0) < 1e-15 && std::abs(pair(p, 1) - 1.0 / 3.0) < 1e-15;
    const bool second = std::abs(pair(p, 0) - 1.0 / 3.0) < 1e-15 && std::abs(pair(p, 1) - 2.0 / 3.0) < 1e-15;
    CHECK((first || second));
  }
  CHECK_THROWS_AS(weight_matrix(0, Gamma(1.0), rng), std::invalid_argument);

  Rng r1(3), r2(3);
  CHECK(weight_matrix(16, Gamma(2.8), r1) == weight_matrix(16, Gamma(2.8), r2));
}

TEST_CASE("weight matrix rows use independent orderings") {
  Rng rng(8);
  const auto w = weight_matrix(64, Gamma(2.0), rng);
  std::size_t distinct_argmax = 0;
  std::vector<bool> seen(64, false);
  for (std::size_t p = 0; p < 64; ++p) {
    const auto row = w.row(p);
    const auto top = static_cast<std::size_t>(std::ranges::max_element(row) - row.begin());
    if (!seen[top]) ++distinct_argmax;
    seen[top] = true;
  }
  // Expected about 64 * (1 - 1/e) ~ 40 distinct winners.
  CHECK(distinct_argmax > 25);
}

TEST_CASE("property: normalization and positivity") {
  Rng gen(101);
  std::uniform_real_distribution<double> gamma_dist(0.0, 10.0);
  std::uniform_int_distribution<std::size_t> n_dist(1, 10000);
  for (int t = 0; t < 200; ++t) {
    const double g = gamma_dist(gen);
    const std::size_t n = n_dist(gen);
    const auto w = zeta_weights(Gamma(g), sample_ordering(n, gen));
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    CHECK(std::abs(sum - 1.0) <= 1e-9);
    CHECK(*std::ranges::min_element(w) > 0.0);
  }
}

TEST_CASE("property: dominance above gamma_min") {
  Rng gen(202);
  std::uniform_real_distribution<double> gamma_dist(kGammaMin, 10.0);
  std::uniform_int_distribution<std::size_t> n_dist(2, 10000);
  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const double g = t == 0 ? kGammaMin : gamma_dist(gen);
    const std::size_t n = t == 1 ? 10000 : n_dist(gen);
    const auto w = zeta_weights(Gamma(g), sample_ordering(n, gen));
    const double top = *std::ranges::max_element(w);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(top > total - top)) ++violations;
  }
  CHECK(violations == 0);

  // Below the bound dominance fails for large enough N.
  const auto w = zeta_weights(Gamma(1.6), Ordering::identity(10000));
  CHECK(w[0] < 1.0 - w[0]);
}

TEST_CASE("property: permutation equivariance") {
  Rng gen(303);
  std::uniform_int_distribution<std::size_t> n_dist(1, 40);
  std::uniform_real_distribution<double> gamma_dist(0.0, 6.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = n_dist(gen);
    const Gamma g(gamma_dist(gen));
    const auto base = sample_ordering(n, gen);
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::ranges::shuffle(sigma, gen);
    std::vector<std::uint32_t> permuted(n);
    for (std::size_t i = 0; i < n; ++i) permuted[i] = base.ranks()[sigma[i]];
    const auto w = zeta_weights(g, base);
    const auto wp = zeta_weights(g, Ordering::from_ranks(permuted));
    for (std::size_t i = 0; i < n; ++i) CHECK(wp[i] == w[sigma[i]]);
  }
}

TEST_CASE("property: top weight grows with gamma") {
  for (const std::size_t n : {2U, 3U, 32U, 1000U}) {
    double previous = 0.0;
    for (double g = 0.0; g <= 12.0; g += 0.25) {
      const double top = zeta_weights(Gamma(g), Ordering::identity(n))[0];
      CHECK(top > previous);
      previous = top;
    }
  }
}

TEST_CASE("property: large gamma concentrates on the top rank") {
  for (const std::size_t n : {2U, 10U, 10000U}) {
    CHECK(zeta_weights(Gamma(50.0), Ordering::identity(n))[0] >= 1.0 - 1e-12);
  }
}
