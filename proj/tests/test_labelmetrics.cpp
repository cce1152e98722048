#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "zmix/labelmetrics.hpp"

using namespace zmix;
using namespace zmix::metrics;

namespace {

// Random probability vector; roughly a third of the entries are exactly zero.
std::vector<double> random_simplex(std::size_t k, std::mt19937_64& rng, bool allow_zeros) {
  std::exponential_distribution<double> e;
  std::bernoulli_distribution zero(allow_zeros ? 0.3 : 0.0);
  std::vector<double> p(k);
  for (auto& v : p) v = zero(rng) ? 0.0 : e(rng);
  if (std::accumulate(p.begin(), p.end(), 0.0) == 0.0) p[0] = 1.0;
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& v : p) v /= s;
  return p;
}

}  // namespace

TEST_CASE("entropy examples") {
  CHECK(entropy(std::vector<double>{0, 1, 0}) == 0.0);
  CHECK(std::abs(entropy(std::vector<double>(10, 0.1)) - std::log(10.0)) <= 1e-12);
  CHECK(std::abs(entropy(std::vector<double>{0.5, 0.5}) - std::log(2.0)) <= 1e-15);
  CHECK_THROWS_AS(entropy(std::vector<double>{0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(entropy(std::vector<double>{1.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(entropy(std::vector<double>{}), std::invalid_argument);
  CHECK_NOTHROW(entropy(std::vector<double>{0.5, 0.5 + 5e-7}));
}

TEST_CASE("cross entropy examples") {
  CHECK(cross_entropy(std::vector<double>{0, 1}, std::vector<double>{0, 1}) == 0.0);
  CHECK(std::abs(cross_entropy(std::vector<double>{0, 1, 0}, std::vector<double>{0.47, 0.53, 0}) -
                 0.6348782724359695) <= 1e-12);
  CHECK(std::abs(cross_entropy(std::vector<double>{0.5, 0.5}, std::vector<double>{0.25, 0.75}) -
                 0.8369882167858358) <= 1e-12);
  // A disagreeing one-hot label is large but finite.
  const double clamped = cross_entropy(std::vector<double>{1, 0}, std::vector<double>{0, 1});
  CHECK(std::abs(clamped + std::log(kLogFloor)) <= 1e-9);
  CHECK_THROWS_AS(cross_entropy(std::vector<double>{1, 0}, std::vector<double>{1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(cross_entropy(std::vector<double>{1, 0}, std::vector<double>{0.9, 0}),
                  std::invalid_argument);
}

TEST_CASE("row evaluation") {
  const auto oracle = Matrix<double>::from_rows({{1, 0}, {0.5, 0.5}});
  const auto soft = Matrix<double>::from_rows({{1, 0}, {0.25, 0.75}});
  const auto m = evaluate_rows(oracle, soft);
  CHECK(m.entropy[0] == 0.0);
  CHECK(m.cross_entropy[0] == 0.0);
  CHECK(m.entropy[1] == doctest::Approx(std::log(2.0)));
  CHECK(m.cross_entropy[1] == doctest::Approx(0.8369882167858358));
  CHECK_THROWS_AS(evaluate_rows(oracle, Matrix<double>(3, 2, 0.5)), std::invalid_argument);
}

TEST_CASE("property: entropy bounds") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t k = 1 + static_cast<std::size_t>(t % 20);
    const auto p = random_simplex(k, rng, true);
    const double h = entropy(p);
    CHECK(h >= 0.0);
    CHECK(h <= std::log(static_cast<double>(k)) + 1e-12);
  }
}

TEST_CASE("property: Gibbs inequality") {
  std::mt19937_64 rng(2);
  double worst = INFINITY;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t k = 2 + static_cast<std::size_t>(t % 9);
    const auto p = random_simplex(k, rng, t % 2 == 0);
    const auto q = random_simplex(k, rng, t % 3 == 0);
    worst = std::min(worst, cross_entropy(p, q) - entropy(p));
    CHECK(std::abs(cross_entropy(p, p) - entropy(p)) <= 1e-12);
  }
  CHECK(worst >= -1e-9);
}

TEST_CASE("property: shared relabeling leaves both metrics unchanged") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 500; ++t) {
    const std::size_t k = 2 + static_cast<std::size_t>(t % 8);
    const auto p = random_simplex(k, rng, true);
    const auto q = random_simplex(k, rng, true);
    std::vector<std::size_t> sigma(k);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::ranges::shuffle(sigma, rng);
    std::vector<double> ps(k), qs(k);
    for (std::size_t i = 0; i < k; ++i) {
      ps[i] = p[sigma[i]];
      qs[i] = q[sigma[i]];
    }
    CHECK(entropy(ps) == doctest::Approx(entropy(p)).epsilon(1e-12));
    CHECK(cross_entropy(ps, qs) == doctest::Approx(cross_entropy(p, q)).epsilon(1e-12));
  }
}

TEST_CASE("histogram of a single value") {
  const std::vector<double> v{0.7};
  const auto d = export_distribution(v, 1, false);
  REQUIRE(d.histogram.centers.size() == 1);
  CHECK(d.histogram.centers[0] == doctest::Approx(0.7));
  CHECK(d.histogram.density[0] * d.histogram.width == doctest::Approx(1.0));
  CHECK_FALSE(d.kde.has_value());
}

TEST_CASE("histogram area is one") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal(3.0, 2.0);
  for (const std::size_t bins : {1U, 7U, 50U, 333U}) {
    std::vector<double> v(1 + rng() % 5000);
    for (auto& x : v) x = normal(rng);
    const auto d = export_distribution(v, bins, true);
    const double area = std::accumulate(d.histogram.density.begin(), d.histogram.density.end(), 0.0) *
                        d.histogram.width;
    CHECK(std::abs(area - 1.0) <= 1e-9);
    REQUIRE(d.kde.has_value());
    CHECK(d.kde->x.size() == kKdePoints);
    // Trapezoid area of the KDE over its support, which spans three bandwidths on each side.
    double kde_area = 0.0;
    for (std::size_t i = 1; i < kKdePoints; ++i) {
      kde_area += 0.5 * (d.kde->density[i] + d.kde->density[i - 1]) * (d.kde->x[i] - d.kde->x[i - 1]);
    }
    CHECK(kde_area > 0.99);
    CHECK(kde_area < 1.001);
  }
  CHECK_THROWS_AS(export_distribution(std::vector<double>{}, 5, false), std::invalid_argument);
  CHECK_THROWS_AS(export_distribution(std::vector<double>{1.0}, 0, false), std::invalid_argument);
}

TEST_CASE("KDE of repeated zeros peaks at zero") {
  const auto d = export_distribution(std::vector<double>{0, 0, 0}, 4, true);
  REQUIRE(d.kde.has_value());
  const auto& c = *d.kde;
  const auto peak = static_cast<std::size_t>(std::ranges::max_element(c.density) - c.density.begin());
  const double step = c.x[1] - c.x[0];
  CHECK(std::abs(c.x[peak]) <= step);
  for (std::size_t i = 0; i < kKdePoints; ++i) {
    CHECK(c.density[i] == doctest::Approx(c.density[kKdePoints - 1 - i]).epsilon(1e-12));
  }

  const auto fixed = export_distribution(std::vector<double>{1.0, 2.0}, 2, true, 0.25);
  CHECK(fixed.kde->x.front() == doctest::Approx(1.0 - 0.75));
  CHECK(fixed.kde->x.back() == doctest::Approx(2.0 + 0.75));
}

TEST_CASE("CSV export") {
  Histogram h{{0.25, 0.75}, {0.4, 1.6}, 0.5};
  std::ostringstream out;
  write_histogram_csv(out, h);
  CHECK(out.str() == "x,density\n0.25,0.40000000000000002\n0.75,1.6000000000000001\n");

  Curve c{{-1.0, 0.0}, {0.5, 2.0}};
  std::ostringstream curve;
  write_curve_csv(curve, c);
  CHECK(curve.str() == "x,density\n-1,0.5\n0,2\n");
}
