#pragma once

#include <span>
#include <vector>

namespace boundarylab::harness {

inline constexpr double kProbClip = 1e-12;

// -mean[y log p + (1 - y) log(1 - p)], with p clipped to [1e-12, 1 - 1e-12].
double log_loss(std::span<const double> y, std::span<const double> p);

// mean (p - y)^2.
double brier(std::span<const double> y, std::span<const double> p);

// Mean over nonempty equal-width probability bins of |mean p - mean y|.
double calib_error(std::span<const double> y, std::span<const double> p,
                   int bins = 10);

// Median of the finite entries; NaN when there are none.
double median(std::vector<double> values);
// Mean of the finite entries; NaN when there are none.
double mean(std::span<const double> values);
double sample_sd(std::span<const double> values);

}  // namespace boundarylab::harness
