#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fatigue/dataset.hpp"
#include "fatigue/density.hpp"
#include "fatigue/ensemble.hpp"
#include "fatigue/mcmc.hpp"
#include "fatigue/optimize.hpp"
#include "fatigue/sampling.hpp"

namespace fatigue {

/// Gaussian error model on transformed lives.
struct LikelihoodSpec {
  Scale scale = Scale::log10;
  double sigma = 0.15;
  std::vector<double> per_point;  ///< overrides `sigma` when non-empty
  bool infer_sigma = false;       ///< sigma becomes a parameter, uniform in ln sigma
  double sigma_lo = 0.01;
  double sigma_hi = 1.0;

  void validate(std::size_t records) const;
  double sigma_at(std::size_t k) const { return per_point.empty() ? sigma : per_point[k]; }
};

/// Lives of parameter sets at given loads, memoized on (theta, sigma_max, R).
/// Safe to call from several threads.
class LifeCache {
 public:
  LifeCache(ForwardScenario scenario, std::vector<Param> params);

  /// Throws on forward-model failure.
  double life(std::span<const double> theta, double sigma_max, double R) const;

  const std::vector<Param>& params() const { return params_; }
  const ForwardScenario& scenario() const { return scenario_; }
  std::size_t evaluations() const;
  std::size_t hits() const;

 private:
  ForwardScenario scenario_;
  std::vector<Param> params_;
  mutable std::mutex mutex_;
  mutable std::map<std::vector<double>, double> cache_;
  mutable std::size_t evaluations_ = 0;
  mutable std::size_t hits_ = 0;
};

struct LikelihoodValue {
  double value = 0.0;
  std::string diagnostic;  ///< set when value is -inf
};

/// Sum over records of the Gaussian log-density of the observed life around the
/// model life. theta holds the calibrated parameters, then ln sigma when inferred.
LikelihoodValue log_likelihood(std::span<const double> theta, const FatigueDataset& data,
                               const LikelihoodSpec& spec, const LifeCache& model);

/// Sum of squared transformed residuals.
double sum_squared_residuals(std::span<const double> theta, const FatigueDataset& data, Scale scale,
                             const LifeCache& model);

struct CalibrationSettings {
  ForwardScenario scenario;  ///< base parameters and load settings; sigma_max and R come from the data
  TemperingSettings tempering;
};

struct CalibrationResult {
  std::vector<Param> params;
  bool sigma_inferred = false;
  PosteriorChain chain;
  std::vector<KdeCurve> marginals;  ///< final-level KDE per chain coordinate
  std::size_t model_evaluations = 0;
};

/// Prior box of the calibrated parameters, plus ln sigma when inferred.
Box prior_box(const ParamSpace& priors, const LikelihoodSpec& spec);

/// Tempered posterior sampling of the parameters named in `priors`, which must
/// be uniform. An empty dataset yields the prior.
CalibrationResult calibrate_bayes(const FatigueDataset& data, const ParamSpace& priors,
                                  const LikelihoodSpec& spec, const CalibrationSettings& settings);

struct DeterministicResult {
  std::vector<Param> params;
  std::vector<double> x;
  double ssr = 0.0;
  NelderMeadResult search;
};

/// Nelder-Mead least squares on transformed lives from x0 with initial steps.
/// With `bounds`, points outside the box score +inf.
DeterministicResult calibrate_deterministic(const FatigueDataset& data, const ForwardScenario& scenario,
                                            std::vector<Param> params, std::span<const double> x0,
                                            std::span<const double> step, Scale scale = Scale::log10,
                                            const std::optional<Box>& bounds = std::nullopt,
                                            const NelderMeadOptions& opts = {});

}  // namespace fatigue
