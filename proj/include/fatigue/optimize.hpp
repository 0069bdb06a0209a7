#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fatigue {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double rel_tol = 1e-6;  ///< on the simplex diameter, relative to max(1, |x_best|)
  std::size_t max_evaluations = 10000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
  std::string message;
};

/// Minimize f from the simplex x0, x0 + step_j e_j. Objective exceptions and
/// NaN are treated as +inf.
NelderMeadResult nelder_mead(const Objective& f, std::span<const double> x0, std::span<const double> step,
                             const NelderMeadOptions& opts = {});

}  // namespace fatigue
