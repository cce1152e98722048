#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "zmix/matrix.hpp"

namespace zmix::metrics {

/// Floor applied to soft-label entries before taking their log.
inline constexpr double kLogFloor = 1e-12;

/// Shannon entropy in nats, with 0 ln 0 = 0. Rejects negative entries and rows
/// whose sum is off 1 by more than 1e-6.
double entropy(std::span<const double> p);

/// -sum oracle_i * ln(max(soft_i, kLogFloor)), in nats.
double cross_entropy(std::span<const double> oracle_p, std::span<const double> soft_label);

/// Per-row entropy / cross entropy of an N x K prediction set.
struct RowMetrics {
  std::vector<double> entropy;
  std::vector<double> cross_entropy;
};
RowMetrics evaluate_rows(const Matrix<double>& oracle_probs, const Matrix<double>& soft_labels);

struct Histogram {
  std::vector<double> centers;
  std::vector<double> density;  // sum(density) * width == 1
  double width = 0.0;
};

struct Curve {
  std::vector<double> x;
  std::vector<double> density;
};

struct Distribution {
  Histogram histogram;
  std::optional<Curve> kde;
};

inline constexpr std::size_t kKdePoints = 256;

/// Equal-width histogram over [min, max] normalized to unit area. A constant input
/// gets one unit-width bin range centered on the value. With `with_kde`, a Gaussian
/// KDE sampled at kKdePoints points over [min - 3h, max + 3h]; bandwidth h defaults
/// to Scott's rule n^{-1/5} * sample std (1.0 when the sample std is 0).
Distribution export_distribution(std::span<const double> values, std::size_t bins, bool with_kde,
                                 std::optional<double> kde_bandwidth = std::nullopt);

/// "x,density" CSV.
void write_histogram_csv(std::ostream& out, const Histogram& h);
void write_curve_csv(std::ostream& out, const Curve& c);

}  // namespace zmix::metrics
