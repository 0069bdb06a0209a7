#include "fatigue/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fatigue/errors.hpp"
#include "fatigue/stats.hpp"

namespace fatigue {

double silverman_bandwidth(std::span<const double> samples) {
  if (samples.size() < 2) throw DomainError("bandwidth needs at least two samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double sd = std::sqrt(variance(sorted));
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) throw DomainError("degenerate sample: zero spread, bandwidth undefined");
  return 0.9 * spread * std::pow(static_cast<double>(samples.size()), -0.2);
}

std::vector<double> default_grid(std::span<const double> samples, double h, std::size_t min_points) {
  if (samples.empty()) throw DomainError("grid needs at least one sample");
  if (!(h > 0.0)) throw DomainError("bandwidth must be positive");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it - 5.0 * h;
  const double hi = *hi_it + 5.0 * h;
  const auto by_spacing = static_cast<std::size_t>(std::ceil((hi - lo) / (0.25 * h))) + 1;
  const std::size_t n = std::max({min_points, by_spacing, std::size_t{2}});
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return grid;
}

namespace {

double resolve_bandwidth(std::span<const double> samples, std::optional<double> bandwidth) {
  for (double v : samples) {
    if (!std::isfinite(v)) throw DomainError("kde: non-finite sample");
  }
  if (bandwidth) {
    if (samples.empty()) throw DomainError("kde needs at least one sample");
    if (!(*bandwidth > 0.0)) throw DomainError("kde: bandwidth must be positive");
    return *bandwidth;
  }
  return silverman_bandwidth(samples);
}

double kernel_sum(std::span<const double> samples, double x, double h) {
  double s = 0.0;
  for (double v : samples) {
    const double z = (x - v) / h;
    s += std::exp(-0.5 * z * z);
  }
  return s / (static_cast<double>(samples.size()) * h * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

KdeCurve kde(std::span<const double> samples, std::span<const double> grid,
             std::optional<double> bandwidth) {
  KdeCurve out;
  out.bandwidth = resolve_bandwidth(samples, bandwidth);
  out.x.assign(grid.begin(), grid.end());
  out.density.resize(grid.size());
  const auto n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(i);
    out.density[j] = kernel_sum(samples, out.x[j], out.bandwidth);
  }
  return out;
}

KdeCurve kde(std::span<const double> samples, std::optional<double> bandwidth) {
  const double h = resolve_bandwidth(samples, bandwidth);
  return kde(samples, default_grid(samples, h), h);
}

KdeCurve kde(const OutputEnsemble& ens, const LifeKdeOptions& opts) {
  const auto values = ens.values(opts.scale, opts.runouts);
  return kde(std::span<const double>(values), opts.bandwidth);
}

double ecdf_at(std::span<const double> samples, double x) {
  if (samples.empty()) throw DomainError("ecdf needs at least one sample");
  const auto below = std::count_if(samples.begin(), samples.end(), [x](double v) { return v <= x; });
  return static_cast<double>(below) / static_cast<double>(samples.size());
}

double ecdf_at(const OutputEnsemble& ens, double cycles, RunoutPolicy runouts) {
  const auto values = ens.values(Scale::linear, runouts);
  return ecdf_at(std::span<const double>(values), cycles);
}

namespace serial {

KdeCurve kde(std::span<const double> samples, std::span<const double> grid,
             std::optional<double> bandwidth) {
  KdeCurve out;
  out.bandwidth = resolve_bandwidth(samples, bandwidth);
  out.x.assign(grid.begin(), grid.end());
  out.density.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out.density[j] = kernel_sum(samples, out.x[j], out.bandwidth);
  return out;
}

}  // namespace serial

}  // namespace fatigue
