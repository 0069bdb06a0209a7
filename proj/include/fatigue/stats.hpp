#pragma once

#include <span>
#include <vector>

namespace fatigue {

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);

/// Linear-interpolation quantile of an ascending sample, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);
double quantile(std::vector<double> x, double q);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};
Interval equal_tailed(std::vector<double> x, double mass);
/// Shortest interval holding a fraction `mass` of the sample.
Interval highest_density(std::vector<double> x, double mass);

/// Trapezoidal integral of y over the abscissas x.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace fatigue
