#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fatigue/material.hpp"

namespace fatigue {

/// Marginal law of one parameter.
struct Marginal {
  enum class Kind { uniform, point_mass };

  Kind kind = Kind::point_mass;
  double lo = 0.0;
  double hi = 0.0;

  static Marginal uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
  static Marginal point_mass(double v) { return {Kind::point_mass, v, v}; }

  /// Quantile transform of u in [0, 1).
  double from_unit(double u) const { return kind == Kind::uniform ? lo + (hi - lo) * u : lo; }
  double mean() const { return 0.5 * (lo + hi); }
  void validate() const;
};

struct ParamDistribution {
  Param param;
  Marginal law;
};

/// Independent marginals, one column each.
using ParamSpace = std::vector<ParamDistribution>;

/// The ten parameters with their uniform ranges.
ParamSpace table_distributions();

/// Replace the listed parameters by point masses at their means.
ParamSpace fix_at_mean(ParamSpace space, std::span<const Param> fixed);

/// N x k matrix of draws, row-major. `columns` names the material parameter of
/// each column; it is empty for matrices over abstract factors.
struct SampleMatrix {
  std::vector<Param> columns;
  std::size_t rows = 0;
  std::size_t width = 0;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  std::size_t cols() const { return width; }
  double operator()(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
  double& operator()(std::size_t r, std::size_t c) { return values[r * cols() + c]; }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * cols(), cols()};
  }
};

/// Draw N rows. Row i consumes its own generator derived from (seed, stream, i),
/// one uniform per column, so the draws are independent of N and of scheduling.
SampleMatrix draw_matrix(const ParamSpace& dists, std::size_t N, std::uint64_t seed,
                         std::uint64_t stream);
SampleMatrix draw_matrix(std::span<const Marginal> laws, std::size_t N, std::uint64_t seed,
                         std::uint64_t stream);

std::vector<Marginal> laws_of(const ParamSpace& dists);

/// Material parameters for one matrix row; columns override `base`.
MaterialParams row_params(const SampleMatrix& m, std::size_t r, const MaterialParams& base);

}  // namespace fatigue
