#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>

#include "zmix/matrix.hpp"
#include "zmix/mixer.hpp"

namespace zmix::synth {

// Fixed shape constants, echoed into GeneratorParams for reproducibility.
inline constexpr double kSpiralScale = std::numbers::inv_pi;  // r = a * theta
inline constexpr double kHelixPitch = 0.15;
inline constexpr double kHelixTurns = 6.0;
inline constexpr int kHarmonics = 6;  // 12-D helix: (cos kt, sin kt) for k = 1..6

struct GeneratorParams {
  std::string shape;
  std::size_t n = 0;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::size_t ambient_dim = 0;
  double turns = 0.0;      // helices only
  double pitch = 0.0;      // 3-D helix only
  double spiral_a = 0.0;   // spirals only

  /// Compact JSON object with snake_case keys.
  std::string to_json() const;
};

struct SyntheticDataset {
  FeatureMatrix features;
  ClassLabels labels;
  GeneratorParams params;
};

/// Two interleaving half circles: class 0 on (cos t, sin t), class 1 on
/// (1 - cos t, 0.5 - sin t), t ~ U[0, pi]. n must be even.
SyntheticDataset gen_crescents(std::size_t n, double noise_sigma, std::uint64_t seed);

/// Two Archimedean arms r = a * theta, theta ~ U[pi/2, 3 pi]; arm 1 is arm 0 rotated by pi.
SyntheticDataset gen_spirals(std::size_t n, double noise_sigma, std::uint64_t seed);

/// 1-D helix, t ~ U[0, 2 pi turns]. ambient_dim 3: (cos t, sin t, pitch * t);
/// ambient_dim 12: (cos t, sin t, cos 2t, sin 2t, ..., cos 6t, sin 6t). Single class.
SyntheticDataset gen_helix(std::size_t n, std::size_t ambient_dim, double turns,
                           double noise_sigma, std::uint64_t seed);

/// Dispatch by shape name: crescents, spirals, helix3, helix12.
SyntheticDataset generate(const std::string& shape, std::size_t n, double noise_sigma,
                          std::uint64_t seed);

}  // namespace zmix::synth
