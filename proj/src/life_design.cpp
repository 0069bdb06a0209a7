#include "fatigue/life_design.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fatigue/errors.hpp"
#include "fatigue/random.hpp"
#include "fatigue/stats.hpp"

namespace fatigue {

namespace {

constexpr std::uint64_t kDrawStream = 41;

ForwardScenario scenario_for(const PredictionSettings& s, double sigma_max, double R) {
  ForwardScenario sc{s.load, s.design, s.base, s.jump, s.model};
  sc.load.sigma_max = sigma_max;
  sc.load.R = R;
  return sc;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

}  // namespace

PosteriorChain point_posterior(std::vector<std::string> names, std::vector<double> values) {
  if (names.size() != values.size() || names.empty()) throw DomainError("point posterior: one value per name");
  PosteriorChain c;
  c.names = std::move(names);
  c.dim = values.size();
  c.samples = std::move(values);
  c.log_target = {0.0};
  c.level = {0};
  c.alphas = {1.0};
  c.acceptance = {1.0};
  return c;
}

std::vector<MaterialParams> posterior_draws(const PosteriorChain& chain, const MaterialParams& base,
                                            std::size_t M, std::uint64_t seed) {
  if (M < 1) throw DomainError("posterior draws: M must be >= 1");
  const auto rows = chain.final_rows();
  if (rows.empty()) throw DomainError("posterior draws: empty chain");
  if (chain.names.size() != chain.dim) throw DomainError("posterior draws: chain coordinates are unnamed");
  std::vector<std::pair<std::size_t, Param>> mapped;
  for (std::size_t j = 0; j < chain.dim; ++j) {
    if (auto p = param_from_name(chain.names[j])) mapped.emplace_back(j, *p);
  }
  std::vector<MaterialParams> out(M, base);
  for (std::size_t i = 0; i < M; ++i) {
    Rng rng = make_rng(seed, kDrawStream, i);
    const std::size_t r = rows[std::uniform_int_distribution<std::size_t>(0, rows.size() - 1)(rng)];
    for (const auto& [j, p] : mapped) set(out[i], p, chain(r, j));
  }
  return out;
}

std::vector<SNPoint> sn_curve(const PosteriorChain& posterior, std::span<const double> stresses, double R,
                              const PredictionSettings& settings) {
  if (stresses.empty()) throw DomainError("sn_curve: empty stress grid");
  if (!std::is_sorted(stresses.begin(), stresses.end())) throw DomainError("sn_curve: stress grid must be sorted");
  const auto draws = posterior_draws(posterior, settings.base, settings.M, settings.seed);
  std::vector<SNPoint> out;
  for (double stress : stresses) {
    const OutputEnsemble lives = propagate(draws, scenario_for(settings, stress, R));
    auto logs = lives.values(Scale::log10, RunoutPolicy::censor);
    if (logs.empty()) throw NumericalError("sn_curve: every evaluation failed at " + std::to_string(stress) + " ksi");
    SNPoint pt;
    pt.stress = stress;
    pt.R = R;
    pt.mean_log10 = mean(logs);
    pt.failures = lives.failures();
    for (auto r : lives.runout) pt.runouts += r;
    pt.all_runout = pt.runouts == logs.size();
    const auto band = [&](double mass) {
      return settings.band == BandKind::equal_tailed ? equal_tailed(logs, mass) : highest_density(logs, mass);
    };
    const Interval b95 = band(0.95);
    const Interval b50 = band(0.5);
    pt.lo95 = std::pow(10.0, b95.lo);
    pt.hi95 = std::pow(10.0, b95.hi);
    pt.lo50 = std::pow(10.0, std::max(b50.lo, b95.lo));
    pt.hi50 = std::pow(10.0, std::min(b50.hi, b95.hi));
    out.push_back(pt);
  }
  return out;
}

LifeDistribution life_distribution(const PosteriorChain& posterior, const PredictionSettings& settings) {
  if (settings.M < 2) throw DomainError("life_distribution: M must be >= 2");
  const auto draws = posterior_draws(posterior, settings.base, settings.M, settings.seed);
  LifeDistribution out;
  out.lives = propagate(draws, scenario_for(settings, settings.load.sigma_max, settings.load.R));
  const auto logs = out.lives.values(Scale::log10, RunoutPolicy::censor);
  if (logs.empty()) throw NumericalError("life_distribution: every evaluation failed");
  const auto [lo, hi] = std::minmax_element(logs.begin(), logs.end());
  out.degenerate = *lo == *hi;
  if (out.degenerate) {
    out.grid = linspace(*lo - 0.5, *lo + 0.5, 101);
  } else {
    out.pdf = kde(std::span<const double>(logs));
    out.grid = out.pdf.x;
  }
  out.cdf.reserve(out.grid.size());
  for (double x : out.grid) out.cdf.push_back(ecdf_at(logs, x));
  return out;
}

double reliability(const OutputEnsemble& lives, double N_target) {
  std::size_t n = 0, ok = 0;
  for (std::size_t i = 0; i < lives.size(); ++i) {
    if (lives.failed[i]) continue;
    ++n;
    ok += lives.cycles[i] >= N_target;
  }
  if (n == 0) throw NumericalError("reliability: every evaluation failed");
  return static_cast<double>(ok) / static_cast<double>(n);
}

void ReliabilityQuery::validate() const {
  if (!(N_target >= 1.0)) throw DomainError("design: N_target must be >= 1");
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("design: reliability target must lie in (0, 1)");
  if (!(v_lo >= 0.0 && v_lo < v_hi)) throw DomainError("design: need 0 <= v_lo < v_hi");
  if (!(tol_p > 0.0) || !(bracket_tol > 0.0)) throw DomainError("design: tolerances must be positive");
  if (scan_points < 2) throw DomainError("design: at least two scan points");
}

DesignResult inverse_design(const ReliabilityQuery& query, const PosteriorChain& posterior,
                            const PredictionSettings& settings) {
  query.validate();
  if (query.N_target > static_cast<double>(settings.load.N_cap)) {
    throw DomainError("design: N_target exceeds the cycle cap");
  }
  const auto draws = posterior_draws(posterior, settings.base, settings.M, settings.seed);
  const double M = static_cast<double>(draws.size());
  auto estimate = [&](double v) {
    ForwardScenario sc = scenario_for(settings, settings.load.sigma_max, settings.load.R);
    sc.design = DesignSpec::from_magnitude(v);
    return DesignPoint{v, reliability(propagate(draws, sc), query.N_target)};
  };
  auto se = [M](double p) { return std::sqrt(std::max(p * (1.0 - p), 1.0 / M) / M); };
  auto falls = [&](const std::vector<DesignPoint>& pts) {
    auto sorted = pts;
    std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.v < b.v; });
    double best = -1.0, best_se = 0.0;
    for (const auto& p : sorted) {
      if (p.reliability < best - 2.0 * std::hypot(se(p.reliability), best_se)) return true;
      if (p.reliability > best) {
        best = p.reliability;
        best_se = se(best);
      }
    }
    return false;
  };

  DesignResult res;
  for (double v : linspace(query.v_lo, query.v_hi, query.scan_points)) res.scan.push_back(estimate(v));
  res.non_monotone = falls(res.scan);

  auto finish = [&](const DesignPoint& p, std::string why) {
    res.v = p.v;
    res.achieved = p.reliability;
    res.mc_error = se(p.reliability);
    res.termination = std::move(why);
    res.non_monotone = res.non_monotone || falls(res.trace);
    return res;
  };

  if (res.scan.front().reliability >= query.rho) return finish(res.scan.front(), "lower bound meets the target");
  const auto first = std::find_if(res.scan.begin(), res.scan.end(),
                                  [&](const DesignPoint& p) { return p.reliability >= query.rho; });
  if (first == res.scan.end()) {
    const auto peak = std::max_element(res.scan.begin(), res.scan.end(),
                                       [](auto& a, auto& b) { return a.reliability < b.reliability; });
    std::ostringstream msg;
    msg << "design infeasible: reliability " << query.rho << " not reached on [" << query.v_lo << ", "
        << query.v_hi << "]; best estimate " << peak->reliability << " at v = " << peak->v;
    throw DomainError(msg.str());
  }
  DesignPoint lo = *(first - 1);
  DesignPoint hi = *first;
  res.trace = {lo, hi};
  while (hi.v - lo.v >= query.bracket_tol) {
    const DesignPoint mid = estimate(0.5 * (lo.v + hi.v));
    res.trace.push_back(mid);
    if (std::abs(mid.reliability - query.rho) <= query.tol_p) return finish(mid, "reliability within tolerance");
    (mid.reliability >= query.rho ? hi : lo) = mid;
  }
  return finish(hi, "bracket below tolerance");
}

std::string design_report(const ReliabilityQuery& query, const PredictionSettings& settings,
                          const DesignResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "query.N_target = " << query.N_target << '\n'
      << "query.reliability = " << query.rho << '\n'
      << "query.sigma_max_ksi = " << settings.load.sigma_max << '\n'
      << "query.R = " << settings.load.R << '\n'
      << "query.v_bounds = " << query.v_lo << ' ' << query.v_hi << '\n'
      << "query.M = " << settings.M << '\n'
      << "result.v = " << result.v << '\n'
      << "result.achieved_reliability = " << result.achieved << '\n'
      << "result.mc_error = " << result.mc_error << '\n'
      << "result.termination = " << result.termination << '\n'
      << "result.non_monotone = " << (result.non_monotone ? "true" : "false") << '\n';
  for (const auto& p : result.scan) out << "scan " << p.v << ' ' << p.reliability << '\n';
  for (const auto& p : result.trace) out << "trace " << p.v << ' ' << p.reliability << '\n';
  return out.str();
}

}  // namespace fatigue
