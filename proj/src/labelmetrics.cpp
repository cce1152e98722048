#include "zmix/labelmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace zmix::metrics {

namespace {

void check_probability(std::span<const double> p) {
  if (p.empty()) throw std::invalid_argument("empty probability vector");
  double sum = 0.0;
  for (const double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("probability entries must be finite and >= 0");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw std::invalid_argument("probability vector sums to " + std::to_string(sum));
  }
}

}  // namespace

double entropy(std::span<const double> p) {
  check_probability(p);
  double h = 0.0;
  for (const double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

double cross_entropy(std::span<const double> oracle_p, std::span<const double> soft_label) {
  if (oracle_p.size() != soft_label.size()) {
    throw std::invalid_argument("prediction and soft label lengths differ");
  }
  check_probability(oracle_p);
  check_probability(soft_label);
  double ce = 0.0;
  for (std::size_t i = 0; i < oracle_p.size(); ++i) {
    if (oracle_p[i] > 0.0) ce -= oracle_p[i] * std::log(std::max(soft_label[i], kLogFloor));
  }
  return ce;
}

RowMetrics evaluate_rows(const Matrix<double>& oracle_probs, const Matrix<double>& soft_labels) {
  if (oracle_probs.rows() != soft_labels.rows() || oracle_probs.cols() != soft_labels.cols()) {
    throw std::invalid_argument("prediction and soft label shapes differ");
  }
  RowMetrics out;
  out.entropy.reserve(oracle_probs.rows());
  out.cross_entropy.reserve(oracle_probs.rows());
  for (std::size_t r = 0; r < oracle_probs.rows(); ++r) {
    out.entropy.push_back(entropy(oracle_probs.row(r)));
    out.cross_entropy.push_back(cross_entropy(oracle_probs.row(r), soft_labels.row(r)));
  }
  return out;
}

Distribution export_distribution(std::span<const double> values, std::size_t bins, bool with_kde,
                                 std::optional<double> kde_bandwidth) {
  if (values.empty()) throw std::invalid_argument("no values to summarize");
  if (bins == 0) throw std::invalid_argument("bins must be positive");
  for (const double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
  }

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }

  Distribution out;
  auto& h = out.histogram;
  h.width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (const double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / h.width);
    counts[std::min(b, bins - 1)]++;
  }
  const double n = static_cast<double>(values.size());
  for (std::size_t b = 0; b < bins; ++b) {
    h.centers.push_back(lo + (static_cast<double>(b) + 0.5) * h.width);
    h.density.push_back(static_cast<double>(counts[b]) / (n * h.width));
  }

  if (with_kde) {
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double var = 0.0;
    for (const double v : values) var += (v - mean) * (v - mean);
    const double sd = values.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    double bw = kde_bandwidth.value_or(std::pow(n, -0.2) * sd);
    if (!(bw > 0.0)) bw = 1.0;

    Curve curve;
    const double x0 = *lo_it - 3.0 * bw;
    const double x1 = *hi_it + 3.0 * bw;
    const double step = (x1 - x0) / static_cast<double>(kKdePoints - 1);
    const double norm = 1.0 / (n * bw * std::sqrt(2.0 * std::numbers::pi));
    for (std::size_t i = 0; i < kKdePoints; ++i) {
      const double x = x0 + step * static_cast<double>(i);
      double s = 0.0;
      for (const double v : values) {
        const double z = (x - v) / bw;
        s += std::exp(-0.5 * z * z);
      }
      curve.x.push_back(x);
      curve.density.push_back(s * norm);
    }
    out.kde = std::move(curve);
  }
  return out;
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "x,density\n" << std::setprecision(17);
  for (std::size_t b = 0; b < h.centers.size(); ++b) out << h.centers[b] << ',' << h.density[b] << '\n';
}

void write_curve_csv(std::ostream& out, const Curve& c) {
  out << "x,density\n" << std::setprecision(17);
  for (std::size_t i = 0; i < c.x.size(); ++i) out << c.x[i] << ',' << c.density[i] << '\n';
}

}  // namespace zmix::metrics
