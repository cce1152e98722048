#include "zmix/synthdata.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

#include "zmix/zeta.hpp"

namespace zmix::synth {

namespace {

using std::numbers::pi;

void check_sigma(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("noise sigma must be finite and >= 0");
  }
}

void check_two_class_n(std::size_t n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("n must be even and >= 2");
}

// Curve parameters are drawn for all points before any noise, so a noisy dataset
// shares its clean curve points with the sigma = 0 dataset of the same seed.
void add_noise(FeatureMatrix& x, double sigma, Rng& rng) {
  if (sigma == 0.0) return;
  std::normal_distribution<double> normal(0.0, sigma);
  for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] += normal(rng);
}

ClassLabels two_class_labels(std::size_t n) {
  ClassLabels labels{std::vector<std::size_t>(n, 0), 2};
  for (std::size_t i = n / 2; i < n; ++i) labels.labels[i] = 1;
  return labels;
}

}  // namespace

std::string GeneratorParams::to_json() const {
  nlohmann::ordered_json j;
  j["shape"] = shape;
  j["n"] = n;
  j["noise"] = noise;
  j["seed"] = seed;
  j["ambient_dim"] = ambient_dim;
  if (turns > 0.0) j["turns"] = turns;
  if (pitch > 0.0) j["pitch"] = pitch;
  if (spiral_a > 0.0) j["spiral_a"] = spiral_a;
  return j.dump();
}

SyntheticDataset gen_crescents(std::size_t n, double noise_sigma, std::uint64_t seed) {
  check_two_class_n(n);
  check_sigma(noise_sigma);
  Rng rng(seed);
  std::uniform_real_distribution<double> angle(0.0, pi);
  FeatureMatrix x(n, 2);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = angle(rng);
    if (i < half) {
      x(i, 0) = std::cos(t);
      x(i, 1) = std::sin(t);
    } else {
      x(i, 0) = 1.0 - std::cos(t);
      x(i, 1) = 0.5 - std::sin(t);
    }
  }
  add_noise(x, noise_sigma, rng);
  return {std::move(x), two_class_labels(n), {"crescents", n, noise_sigma, seed, 2}};
}

SyntheticDataset gen_spirals(std::size_t n, double noise_sigma, std::uint64_t seed) {
  check_two_class_n(n);
  check_sigma(noise_sigma);
  Rng rng(seed);
  std::uniform_real_distribution<double> angle(0.5 * pi, 3.0 * pi);
  FeatureMatrix x(n, 2);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = angle(rng);
    const double r = kSpiralScale * theta;
    const double phase = i < half ? theta : theta + pi;
    x(i, 0) = r * std::cos(phase);
    x(i, 1) = r * std::sin(phase);
  }
  add_noise(x, noise_sigma, rng);
  GeneratorParams params{"spirals", n, noise_sigma, seed, 2};
  params.spiral_a = kSpiralScale;
  return {std::move(x), two_class_labels(n), params};
}

SyntheticDataset gen_helix(std::size_t n, std::size_t ambient_dim, double turns,
                           double noise_sigma, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (ambient_dim != 3 && ambient_dim != 12) {
    throw std::invalid_argument("helix ambient dimension must be 3 or 12");
  }
  if (!(turns > 0.0) || !std::isfinite(turns)) throw std::invalid_argument("turns must be > 0");
  check_sigma(noise_sigma);

  Rng rng(seed);
  std::uniform_real_distribution<double> param(0.0, 2.0 * pi * turns);
  FeatureMatrix x(n, ambient_dim);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = param(rng);
    if (ambient_dim == 3) {
      x(i, 0) = std::cos(t);
      x(i, 1) = std::sin(t);
      x(i, 2) = kHelixPitch * t;
    } else {
      for (int k = 1; k <= kHarmonics; ++k) {
        x(i, 2 * (k - 1)) = std::cos(k * t);
        x(i, 2 * (k - 1) + 1) = std::sin(k * t);
      }
    }
  }
  add_noise(x, noise_sigma, rng);
  GeneratorParams params{ambient_dim == 3 ? "helix3" : "helix12", n, noise_sigma, seed,
                         ambient_dim};
  params.turns = turns;
  if (ambient_dim == 3) params.pitch = kHelixPitch;
  return {std::move(x), ClassLabels{std::vector<std::size_t>(n, 0), 1}, params};
}

SyntheticDataset generate(const std::string& shape, std::size_t n, double noise_sigma,
                          std::uint64_t seed) {
  if (shape == "crescents") return gen_crescents(n, noise_sigma, seed);
  if (shape == "spirals") return gen_spirals(n, noise_sigma, seed);
  if (shape == "helix3") return gen_helix(n, 3, kHelixTurns, noise_sigma, seed);
  if (shape == "helix12") return gen_helix(n, 12, kHelixTurns, noise_sigma, seed);
  throw std::invalid_argument("unknown shape '" + shape + "'");
}

}  // namespace zmix::synth
