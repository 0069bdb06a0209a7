#include "fatigue/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fatigue/errors.hpp"

namespace fatigue {

double mean(std::span<const double> x) {
  if (x.empty()) throw DomainError("mean of an empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw DomainError("variance needs at least two values");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  if (q < 0.0 || q > 1.0) throw DomainError("quantile level outside [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const double f = pos - static_cast<double>(i);
  return sorted[i] + f * (sorted[i + 1] - sorted[i]);
}

double quantile(std::vector<double> x, double q) {
  std::sort(x.begin(), x.end());
  return quantile_sorted(x, q);
}

Interval equal_tailed(std::vector<double> x, double mass) {
  if (!(mass > 0.0 && mass < 1.0)) throw DomainError("interval mass must lie in (0, 1)");
  std::sort(x.begin(), x.end());
  const double tail = 0.5 * (1.0 - mass);
  return {quantile_sorted(x, tail), quantile_sorted(x, 1.0 - tail)};
}

Interval highest_density(std::vector<double> x, double mass) {
  if (!(mass > 0.0 && mass < 1.0)) throw DomainError("interval mass must lie in (0, 1)");
  if (x.empty()) throw DomainError("interval of an empty sample");
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  const auto span = std::min(n - 1, static_cast<std::size_t>(std::ceil(mass * static_cast<double>(n))) - 1);
  std::size_t best = 0;
  for (std::size_t i = 1; i + span < n; ++i) {
    if (x[i + span] - x[i] < x[best + span] - x[best]) best = i;
  }
  return {x[best], x[best + span]};
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("trapezoid: size mismatch");
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

}  // namespace fatigue
