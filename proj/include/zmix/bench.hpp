#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace zmix::bench {

struct SampleStats {
  double median = 0.0;
  double mean = 0.0;
  double std = 0.0;  // sample std (n - 1)
};

SampleStats summarize(std::span<const double> samples);

struct BenchReport {
  std::string method;
  std::vector<std::size_t> batch_shape;
  std::size_t iterations = 0;
  std::vector<double> samples_us;
  SampleStats stats;
};

struct BenchConfig {
  std::size_t batch = 32;
  std::vector<std::size_t> sample_dims{3, 224, 224};
  std::size_t classes = 10;
  std::size_t iterations = 100;
  std::size_t warmup = 3;
  std::uint64_t seed = 0;
  double gamma = 2.8;
  double alpha = 1.0;
};

struct BenchComparison {
  BenchReport zeta;
  BenchReport mixup;
  /// median(zeta) / median(mixup)
  double ratio = 0.0;
  std::string isa;

  std::string to_json() const;
};

/// Times one augmentation pass of each method on the same random f32 batch.
/// Each timed region covers the random draws plus the mixing of features and labels;
/// outputs are preallocated. Throws std::invalid_argument if iterations < 10 or warmup < 3.
BenchComparison run_benchmark(const BenchConfig& config);

}  // namespace zmix::bench
