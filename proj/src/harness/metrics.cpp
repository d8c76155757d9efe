#include "boundarylab/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "boundarylab/error.hpp"

namespace boundarylab::harness {

namespace {

void check_lengths(std::span<const double> y, std::span<const double> p) {
  if (y.size() != p.size()) {
    throw InvalidArgument("outcome and probability vectors differ in length");
  }
  if (y.empty()) throw InvalidArgument("metric needs at least one observation");
}

}  // namespace

double log_loss(std::span<const double> y, std::span<const double> p) {
  check_lengths(y, p);
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double q = std::clamp(p[i], kProbClip, 1.0 - kProbClip);
    total -= y[i] * std::log(q) + (1.0 - y[i]) * std::log1p(-q);
  }
  return total / static_cast<double>(y.size());
}

double brier(std::span<const double> y, std::span<const double> p) {
  check_lengths(y, p);
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = p[i] - y[i];
    total += d * d;
  }
  return total / static_cast<double>(y.size());
}

double calib_error(std::span<const double> y, std::span<const double> p,
                   int bins) {
  check_lengths(y, p);
  if (bins < 1) throw InvalidArgument("calibration needs at least one bin");
  std::vector<double> sum_p(static_cast<std::size_t>(bins), 0.0);
  std::vector<double> sum_y(static_cast<std::size_t>(bins), 0.0);
  std::vector<std::size_t> count(static_cast<std::size_t>(bins), 0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    auto bin = static_cast<int>(p[i] * bins);
    bin = std::clamp(bin, 0, bins - 1);
    const auto b = static_cast<std::size_t>(bin);
    sum_p[b] += p[i];
    sum_y[b] += y[i];
    ++count[b];
  }
  double total = 0.0;
  int used = 0;
  for (std::size_t b = 0; b < count.size(); ++b) {
    if (count[b] == 0) continue;
    const auto c = static_cast<double>(count[b]);
    total += std::abs(sum_p[b] / c - sum_y[b] / c);
    ++used;
  }
  return total / used;
}

double median(std::vector<double> values) {
  std::erase_if(values, [](double v) { return !std::isfinite(v); });
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

double mean(std::span<const double> values) {
  double total = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    total += v;
    ++count;
  }
  if (count == 0) return std::numeric_limits<double>::quiet_NaN();
  return total / static_cast<double>(count);
}

double sample_sd(std::span<const double> values) {
  const double m = mean(values);
  double total = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    total += (v - m) * (v - m);
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(total / static_cast<double>(count - 1));
}

}  // namespace boundarylab::harness
