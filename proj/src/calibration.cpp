#include "fatigue/calibration.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fatigue/errors.hpp"

namespace fatigue {

void LikelihoodSpec::validate(std::size_t records) const {
  if (!per_point.empty()) {
    if (infer_sigma) throw ConfigError("likelihood: per-point sigmas cannot be combined with an inferred sigma");
    if (per_point.size() != records) throw ConfigError("likelihood: one sigma per record required");
    for (double s : per_point) {
      if (!(s > 0.0)) throw ConfigError("likelihood: sigma must be positive");
    }
  } else if (!(sigma > 0.0)) {
    throw ConfigError("likelihood: sigma must be positive");
  }
  if (infer_sigma && !(sigma_lo > 0.0 && sigma_lo < sigma_hi)) {
    throw ConfigError("likelihood: need 0 < sigma_lo < sigma_hi");
  }
}

LifeCache::LifeCache(ForwardScenario scenario, std::vector<Param> params)
    : scenario_(std::move(scenario)), params_(std::move(params)) {}

double LifeCache::life(std::span<const double> theta, double sigma_max, double R) const {
  std::vector<double> key(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(params_.size()));
  key.push_back(sigma_max);
  key.push_back(R);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) {
      ++hits_;
      return it->second;
    }
  }
  ForwardScenario sc = scenario_;
  sc.load.sigma_max = sigma_max;
  sc.load.R = R;
  MaterialParams mp = sc.base;
  for (std::size_t j = 0; j < params_.size(); ++j) set(mp, params_[j], theta[j]);
  const double n = static_cast<double>(simulate_life(sc.load, sc.design, mp, sc.jump, sc.model).N_f);
  std::lock_guard lock(mutex_);
  ++evaluations_;
  cache_.emplace(std::move(key), n);
  return n;
}

std::size_t LifeCache::evaluations() const {
  std::lock_guard lock(mutex_);
  return evaluations_;
}

std::size_t LifeCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

LikelihoodValue log_likelihood(std::span<const double> theta, const FatigueDataset& data,
                               const LikelihoodSpec& spec, const LifeCache& model) {
  const std::size_t np = model.params().size();
  if (theta.size() != np + (spec.infer_sigma ? 1 : 0)) throw DomainError("log_likelihood: wrong parameter count");
  LikelihoodValue out;
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto& rec = data.records[k];
    const double sigma = spec.infer_sigma ? std::exp(theta[np]) : spec.sigma_at(k);
    double y;
    try {
      y = to_scale(model.life(theta, rec.notch_stress, rec.R), spec.scale);
    } catch (const Error& e) {
      out.value = -std::numeric_limits<double>::infinity();
      out.diagnostic = "sample '" + rec.sample_id + "': " + e.what();
      return out;
    }
    const double r = to_scale(rec.cycles, spec.scale) - y;
    out.value += -std::log(sigma) - half_log_2pi - r * r / (2.0 * sigma * sigma);
  }
  return out;
}

double sum_squared_residuals(std::span<const double> theta, const FatigueDataset& data, Scale scale,
                             const LifeCache& model) {
  double ssr = 0.0;
  for (const auto& rec : data.records) {
    const double r = to_scale(rec.cycles, scale) - to_scale(model.life(theta, rec.notch_stress, rec.R), scale);
    ssr += r * r;
  }
  return ssr;
}

Box prior_box(const ParamSpace& priors, const LikelihoodSpec& spec) {
  Box box;
  for (const auto& d : priors) {
    if (d.law.kind != Marginal::Kind::uniform) {
      throw ConfigError("calibration prior for '" + std::string(param_name(d.param)) + "' must be uniform");
    }
    box.lo.push_back(d.law.lo);
    box.hi.push_back(d.law.hi);
  }
  if (spec.infer_sigma) {
    box.lo.push_back(std::log(spec.sigma_lo));
    box.hi.push_back(std::log(spec.sigma_hi));
  }
  box.validate();
  return box;
}

CalibrationResult calibrate_bayes(const FatigueDataset& data, const ParamSpace& priors,
                                  const LikelihoodSpec& spec, const CalibrationSettings& settings) {
  spec.validate(data.size());
  data.validate();
  CalibrationResult res;
  for (const auto& d : priors) res.params.push_back(d.param);
  res.sigma_inferred = spec.infer_sigma;
  const Box box = prior_box(priors, spec);
  const LifeCache model(settings.scenario, res.params);

  const LogDensity ll = [&](std::span<const double> theta) { return log_likelihood(theta, data, spec, model).value; };
  res.chain = tempered_sample(box, ll, settings.tempering);
  for (Param p : res.params) res.chain.names.emplace_back(param_name(p));
  if (spec.infer_sigma) res.chain.names.emplace_back("log_sigma");
  res.model_evaluations = model.evaluations();

  for (std::size_t j = 0; j < box.dim(); ++j) {
    const auto column = res.chain.final_column(j);
    try {
      res.marginals.push_back(kde(std::span<const double>(column)));
    } catch (const DomainError&) {
      res.marginals.push_back({});
    }
  }
  return res;
}

DeterministicResult calibrate_deterministic(const FatigueDataset& data, const ForwardScenario& scenario,
                                            std::vector<Param> params, std::span<const double> x0,
                                            std::span<const double> step, Scale scale,
                                            const std::optional<Box>& bounds, const NelderMeadOptions& opts) {
  if (data.empty()) throw DataError("deterministic calibration needs data");
  data.validate();
  if (x0.size() != params.size()) throw DomainError("calibrate_deterministic: one start value per parameter");
  DeterministicResult res;
  const LifeCache model(scenario, params);
  res.params = std::move(params);
  if (bounds) {
    bounds->validate();
    if (bounds->dim() != x0.size()) throw DomainError("calibrate_deterministic: bounds dimension mismatch");
  }
  const Objective ssr = [&](std::span<const double> x) {
    if (bounds && !bounds->contains(x)) return std::numeric_limits<double>::infinity();
    return sum_squared_residuals(x, data, scale, model);
  };
  res.search = nelder_mead(ssr, x0, step, opts);
  res.x = res.search.x;
  res.ssr = res.search.value;
  return res;
}

}  // namespace fatigue
