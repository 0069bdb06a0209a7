#include "fatigue/ensemble.hpp"

#include <limits>

#include "fatigue/errors.hpp"

namespace fatigue {

std::size_t OutputEnsemble::failures() const {
  std::size_t n = 0;
  for (auto f : failed) n += f;
  return n;
}

std::vector<double> OutputEnsemble::values(Scale scale, RunoutPolicy policy) const {
  std::vector<double> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    if (usable(i, policy)) out.push_back(to_scale(cycles[i], scale));
  }
  return out;
}

LifeOutcome evaluate_life(const MaterialParams& params, const ForwardScenario& scenario) {
  LifeOutcome out;
  try {
    const LifeResult life =
        simulate_life(scenario.load, scenario.design, params, scenario.jump, scenario.model);
    out.cycles = static_cast<double>(life.N_f);
    out.runout = life.runout;
  } catch (const Error& e) {
    out.cycles = std::numeric_limits<double>::quiet_NaN();
    out.failed = true;
    out.error = e.what();
  }
  return out;
}

namespace {

OutputEnsemble make_ensemble(std::size_t rows, const ForwardScenario& scenario) {
  OutputEnsemble out;
  out.cycles.resize(rows);
  out.runout.assign(rows, 0);
  out.failed.assign(rows, 0);
  out.errors.resize(rows);
  out.N_cap = scenario.load.N_cap;
  return out;
}

void store(OutputEnsemble& out, std::size_t i, LifeOutcome&& r) {
  out.cycles[i] = r.cycles;
  out.runout[i] = r.runout;
  out.failed[i] = r.failed;
  out.errors[i] = std::move(r.error);
}

}  // namespace

OutputEnsemble propagate(const SampleMatrix& m, const ForwardScenario& scenario) {
  OutputEnsemble out = make_ensemble(m.rows, scenario);
  const auto n = static_cast<std::int64_t>(m.rows);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    store(out, r, evaluate_life(row_params(m, r, scenario.base), scenario));
  }
  return out;
}

OutputEnsemble propagate(std::span<const MaterialParams> params, const ForwardScenario& scenario) {
  OutputEnsemble out = make_ensemble(params.size(), scenario);
  const auto n = static_cast<std::int64_t>(params.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    store(out, r, evaluate_life(params[r], scenario));
  }
  return out;
}

namespace serial {

OutputEnsemble propagate(const SampleMatrix& m, const ForwardScenario& scenario) {
  OutputEnsemble out = make_ensemble(m.rows, scenario);
  for (std::size_t r = 0; r < m.rows; ++r) {
    store(out, r, evaluate_life(row_params(m, r, scenario.base), scenario));
  }
  return out;
}

OutputEnsemble propagate(std::span<const MaterialParams> params, const ForwardScenario& scenario) {
  OutputEnsemble out = make_ensemble(params.size(), scenario);
  for (std::size_t r = 0; r < params.size(); ++r) store(out, r, evaluate_life(params[r], scenario));
  return out;
}

}  // namespace serial

}  // namespace fatigue
