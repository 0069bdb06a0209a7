#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fatigue/ensemble.hpp"

namespace fatigue {

struct KdeCurve {
  std::vector<double> x;
  std::vector<double> density;
  double bandwidth = 0.0;
};

/// 0.9 min(sd, IQR/1.34) n^(-1/5). Throws when the sample has no spread.
double silverman_bandwidth(std::span<const double> samples);

/// Uniform grid covering the samples with 5h margins and spacing at most h/4.
std::vector<double> default_grid(std::span<const double> samples, double h,
                                 std::size_t min_points = 512);

/// Gaussian KDE evaluated on `grid`, parallel over grid points.
KdeCurve kde(std::span<const double> samples, std::span<const double> grid,
             std::optional<double> bandwidth = std::nullopt);
/// Same, on the default grid.
KdeCurve kde(std::span<const double> samples, std::optional<double> bandwidth = std::nullopt);

struct LifeKdeOptions {
  Scale scale = Scale::log10;
  RunoutPolicy runouts = RunoutPolicy::censor;
  std::optional<double> bandwidth;
};
/// KDE of the usable lives of an ensemble in the requested scale.
KdeCurve kde(const OutputEnsemble& ens, const LifeKdeOptions& opts = {});

/// Fraction of samples <= x.
double ecdf_at(std::span<const double> samples, double x);
/// Fraction of usable lives <= cycles.
double ecdf_at(const OutputEnsemble& ens, double cycles,
               RunoutPolicy runouts = RunoutPolicy::censor);

namespace serial {
KdeCurve kde(std::span<const double> samples, std::span<const double> grid,
             std::optional<double> bandwidth = std::nullopt);
}

}  // namespace fatigue
