#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <omp.h>

#include "fatigue/damage_model.hpp"
#include "fatigue/sampling.hpp"

namespace fatigue {

/// Output space used for statistics on lives.
enum class Scale { log10, linear };

/// How runouts enter statistics: kept at N_cap, or dropped.
enum class RunoutPolicy { censor, exclude };

/// Everything the forward model needs besides the sampled parameters.
struct ForwardScenario {
  LoadSpec load;
  DesignSpec design;
  MaterialParams base;
  CycleJumpPolicy jump;
  ModelOptions model;
};

/// Model outputs aligned row-for-row with a SampleMatrix.
struct OutputEnsemble {
  std::vector<double> cycles;  ///< N_f, N_cap on runout, NaN when the row failed
  std::vector<std::uint8_t> runout;
  std::vector<std::uint8_t> failed;
  std::vector<std::string> errors;  ///< message per failed row, empty otherwise
  std::int64_t N_cap = 0;

  std::size_t size() const { return cycles.size(); }
  std::size_t failures() const;
  bool usable(std::size_t i, RunoutPolicy policy) const {
    return !failed[i] && !(policy == RunoutPolicy::exclude && runout[i]);
  }
  /// Usable outputs in the requested scale, in row order.
  std::vector<double> values(Scale scale, RunoutPolicy policy = RunoutPolicy::censor) const;
};

inline double to_scale(double cycles, Scale scale) {
  return scale == Scale::log10 ? std::log10(cycles) : cycles;
}

/// Parallel map of `f(row_span)` over the rows of a matrix. Output order follows
/// row order whatever the schedule.
template <class F>
std::vector<double> map_rows(const SampleMatrix& m, F&& f) {
  std::vector<double> out(m.rows);
  const auto n = static_cast<std::int64_t>(m.rows);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = f(m.row(static_cast<std::size_t>(i)));
  }
  return out;
}

/// Forward model over every row, OpenMP-parallel. Per-row failures are captured
/// as flagged entries.
OutputEnsemble propagate(const SampleMatrix& m, const ForwardScenario& scenario);
/// Same over explicit parameter sets; `scenario.base` is ignored.
OutputEnsemble propagate(std::span<const MaterialParams> params, const ForwardScenario& scenario);

/// Forward model for one parameter set, with failures captured.
struct LifeOutcome {
  double cycles = 0.0;
  bool runout = false;
  bool failed = false;
  std::string error;
};
LifeOutcome evaluate_life(const MaterialParams& params, const ForwardScenario& scenario);

namespace serial {

/// Reference implementations kept for testing the parallel kernels.
template <class F>
std::vector<double> map_rows(const SampleMatrix& m, F&& f) {
  std::vector<double> out(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) out[i] = f(m.row(i));
  return out;
}

OutputEnsemble propagate(const SampleMatrix& m, const ForwardScenario& scenario);
OutputEnsemble propagate(std::span<const MaterialParams> params, const ForwardScenario& scenario);

}  // namespace serial

}  // namespace fatigue
