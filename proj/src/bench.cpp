#include "zmix/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "zmix/kernels.hpp"
#include "zmix/mixer.hpp"

namespace zmix::bench {

namespace {

nlohmann::ordered_json report_json(const BenchReport& r) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["batch_shape"] = r.batch_shape;
  j["iterations"] = r.iterations;
  j["median_us"] = r.stats.median;
  j["mean_us"] = r.stats.mean;
  j["std_us"] = r.stats.std;
  j["samples_us"] = r.samples_us;
  return j;
}

std::vector<double> time_iterations(std::size_t warmup, std::size_t iterations,
                                    const std::function<void()>& body) {
  for (std::size_t i = 0; i < warmup; ++i) body();
  std::vector<double> samples;
  samples.reserve(iterations);
  for (std::size_t i = 0; i < iterations; ++i) {
    const auto start = std::chrono::steady_clock::now();
    body();
    const auto stop = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double, std::micro>(stop - start).count());
  }
  return samples;
}

}  // namespace

SampleStats summarize(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  SampleStats s;
  s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  if (n > 1) {
    double sq = 0.0;
    for (const double v : sorted) sq += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(sq / static_cast<double>(n - 1));
  }
  return s;
}

std::string BenchComparison::to_json() const {
  nlohmann::ordered_json j;
  j["isa"] = isa;
  j["ratio_zeta_over_mixup"] = ratio;
  j["zeta"] = report_json(zeta);
  j["mixup"] = report_json(mixup);
  return j.dump(2);
}

BenchComparison run_benchmark(const BenchConfig& config) {
  if (config.iterations < 10) throw std::invalid_argument("iterations must be >= 10");
  if (config.warmup < 3) throw std::invalid_argument("warmup must be >= 3");
  if (config.batch < 2) throw std::invalid_argument("batch must be >= 2");
  if (config.classes == 0) throw std::invalid_argument("classes must be positive");

  std::size_t width = 1;
  for (const auto d : config.sample_dims) width *= d;
  if (width == 0) throw std::invalid_argument("sample dimensions must be positive");
  const std::size_t n = config.batch;

  // Shared random input: N x (C*H*W) features in f32 plus one-hot labels.
  Rng data_rng(config.seed);
  Matrix<float> x(n, width);
  std::normal_distribution<float> normal(0.0F, 1.0F);
  for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = normal(data_rng);
  std::uniform_int_distribution<std::size_t> pick(0, config.classes - 1);
  ClassLabels labels{std::vector<std::size_t>(n), config.classes};
  for (auto& l : labels.labels) l = pick(data_rng);
  const auto y = one_hot(labels);

  Matrix<float> out_x(n, width);
  SoftLabelMatrix out_y(n, config.classes);
  const Gamma gamma(config.gamma);
  MixupOptions mix_options;
  mix_options.alpha = config.alpha;

  std::vector<std::size_t> shape{n};
  shape.insert(shape.end(), config.sample_dims.begin(), config.sample_dims.end());

  BenchComparison result;
  result.isa = kernels::isa_name();

  Rng zeta_rng(config.seed + 1);
  result.zeta.method = "zeta_mixup";
  result.zeta.samples_us = time_iterations(config.warmup, config.iterations, [&] {
    const auto w = weight_matrix(n, gamma, zeta_rng);
    zeta_mixup_into(x, y, w, out_x, out_y);
  });

  Rng mix_rng(config.seed + 2);
  result.mixup.method = "mixup";
  result.mixup.samples_us = time_iterations(config.warmup, config.iterations, [&] {
    const auto draw = draw_mixup(n, mix_options, mix_rng);
    mixup_into(x, y, draw, out_x, out_y);
  });

  for (auto* r : {&result.zeta, &result.mixup}) {
    r->batch_shape = shape;
    r->iterations = config.iterations;
    r->stats = summarize(r->samples_us);
  }
  result.ratio = result.zeta.stats.median / result.mixup.stats.median;
  return result;
}

}  // namespace zmix::bench
