#include "fatigue/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fatigue/errors.hpp"
#include "fatigue/random.hpp"
#include "fatigue/stats.hpp"

namespace fatigue {

SampleMatrix build_radial_matrix(const SampleMatrix& A, const SampleMatrix& B, std::size_t i) {
  if (A.rows != B.rows || A.cols() != B.cols()) throw DomainError("radial matrix: A and B differ in shape");
  if (i >= A.cols()) throw DomainError("radial matrix: column index out of range");
  SampleMatrix D = A;
  for (std::size_t r = 0; r < A.rows; ++r) D(r, i) = B(r, i);
  return D;
}

double total_effect(std::span<const double> Y_A, std::span<const double> Y_D) {
  if (Y_A.size() != Y_D.size()) throw DomainError("total_effect: output lengths differ");
  if (Y_A.size() < 2) throw DomainError("total_effect: need at least two outputs");
  const double n = static_cast<double>(Y_A.size());
  const double centre = mean(Y_A);
  double sa = 0.0, saa = 0.0, sad = 0.0;
  for (std::size_t j = 0; j < Y_A.size(); ++j) {
    const double a = Y_A[j] - centre;
    const double d = Y_D[j] - centre;
    sa += a;
    saa += a * a;
    sad += a * d;
  }
  const double ma = sa / n;
  const double var = saa / n - ma * ma;
  if (!(var > 0.0)) throw DomainError("total_effect: zero output variance");
  const double S = 1.0 - (sad / n - ma * ma) / var;
  if (!std::isfinite(S)) throw NumericalError("total_effect: non-finite estimate");
  return S;
}

std::vector<std::size_t> SensitivityResult::ranking() const {
  std::vector<std::size_t> idx(S_T.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [this](std::size_t a, std::size_t b) { return S_T[a] > S_T[b]; });
  return idx;
}

SaltelliDesign make_saltelli_design(std::span<const Marginal> laws, std::size_t N, std::uint64_t seed) {
  SaltelliDesign d;
  d.A = draw_matrix(laws, N, seed, kStreamA);
  d.B = draw_matrix(laws, N, seed, kStreamB);
  for (std::size_t i = 0; i < laws.size(); ++i) d.D.push_back(build_radial_matrix(d.A, d.B, i));
  return d;
}

SensitivityResult estimate_total_effects(std::span<const double> Y_A,
                                         const std::vector<std::vector<double>>& Y_D,
                                         std::vector<std::string> names,
                                         const SaltelliOptions& opts) {
  const std::size_t k = Y_D.size();
  if (names.size() != k) throw DomainError("total effects: one name per factor required");
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < Y_A.size(); ++r) {
    bool ok = std::isfinite(Y_A[r]);
    for (const auto& y : Y_D) {
      if (y.size() != Y_A.size()) throw DomainError("total effects: output lengths differ");
      ok = ok && std::isfinite(y[r]);
    }
    if (ok) keep.push_back(r);
  }

  SensitivityResult res;
  res.names = std::move(names);
  res.N = Y_A.size();
  res.excluded_rows = Y_A.size() - keep.size();

  auto estimate = [&](const std::vector<std::size_t>& rows, std::size_t i) {
    std::vector<double> a(rows.size()), d(rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
      a[j] = Y_A[rows[j]];
      d[j] = Y_D[i][rows[j]];
    }
    return total_effect(a, d);
  };

  for (std::size_t i = 0; i < k; ++i) res.S_T.push_back(estimate(keep, i));

  std::vector<std::vector<double>> boot(k);
  std::vector<std::size_t> rows(keep.size());
  for (std::size_t b = 0; b < opts.bootstrap; ++b) {
    Rng rng = make_rng(opts.seed, kStreamBootstrap, b);
    std::uniform_int_distribution<std::size_t> pick(0, keep.size() - 1);
    for (auto& r : rows) r = keep[pick(rng)];
    for (std::size_t i = 0; i < k; ++i) {
      try {
        boot[i].push_back(estimate(rows, i));
      } catch (const DomainError&) {
        // a resample with no spread carries no information
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (boot[i].empty()) {
      res.q05.push_back(res.S_T[i]);
      res.q95.push_back(res.S_T[i]);
    } else {
      res.q05.push_back(quantile(boot[i], 0.05));
      res.q95.push_back(quantile(boot[i], 0.95));
    }
  }
  return res;
}

SensitivityResult saltelli_total_effects(std::span<const Marginal> laws,
                                         std::vector<std::string> names, std::size_t N,
                                         const RowModel& model, const SaltelliOptions& opts) {
  const SaltelliDesign design = make_saltelli_design(laws, N, opts.seed);
  const auto Y_A = map_rows(design.A, model);
  const auto Y_B = map_rows(design.B, model);
  std::vector<std::vector<double>> Y_D;
  for (const auto& D : design.D) Y_D.push_back(map_rows(D, model));
  SensitivityResult res = estimate_total_effects(Y_A, Y_D, std::move(names), opts);
  res.evaluations = Y_A.size() + Y_B.size() + laws.size() * N;
  return res;
}

namespace {

std::vector<double> censored(const OutputEnsemble& e, Scale scale) {
  std::vector<double> out(e.size());
  for (std::size_t r = 0; r < e.size(); ++r) out[r] = to_scale(e.cycles[r], scale);
  return out;
}

std::vector<std::string> names_of(const ParamSpace& dists) {
  std::vector<std::string> out;
  for (const auto& d : dists) out.emplace_back(param_name(d.param));
  return out;
}

}  // namespace

SensitivityStudy run_sensitivity_study(const ParamSpace& dists, const ForwardScenario& scenario,
                                       std::size_t N, const SaltelliOptions& opts) {
  const SampleMatrix A = draw_matrix(dists, N, opts.seed, kStreamA);
  const SampleMatrix B = draw_matrix(dists, N, opts.seed, kStreamB);
  SensitivityStudy study;
  study.base_outputs = propagate(A, scenario);
  const OutputEnsemble Y_B = propagate(B, scenario);
  std::vector<OutputEnsemble> Y_D;
  for (std::size_t i = 0; i < dists.size(); ++i) Y_D.push_back(propagate(build_radial_matrix(A, B, i), scenario));
  const std::size_t evaluations = study.base_outputs.size() + Y_B.size() + dists.size() * N;

  for (Scale scale : {Scale::log10, Scale::linear}) {
    std::vector<std::vector<double>> yd;
    for (const auto& e : Y_D) yd.push_back(censored(e, scale));
    auto res = estimate_total_effects(censored(study.base_outputs, scale), yd, names_of(dists), opts);
    res.evaluations = evaluations;
    (scale == Scale::log10 ? study.log10 : study.linear) = std::move(res);
  }
  return study;
}

ScatterStudy scatter_study(const ParamSpace& dists, const ForwardScenario& scenario, std::size_t N,
                           std::uint64_t seed) {
  ScatterStudy s;
  s.inputs = draw_matrix(dists, N, seed, kStreamA);
  s.outputs = propagate(s.inputs, scenario);
  return s;
}

std::vector<KdeComparison> kde_compare_study(const ParamSpace& dists, const ForwardScenario& scenario,
                                             std::size_t N,
                                             const std::vector<std::vector<Param>>& fixed_subsets,
                                             std::uint64_t seed) {
  std::vector<std::vector<Param>> subsets{{}};
  subsets.insert(subsets.end(), fixed_subsets.begin(), fixed_subsets.end());

  std::vector<KdeComparison> out;
  std::vector<std::vector<double>> lives;
  for (const auto& fixed : subsets) {
    KdeComparison c;
    c.fixed = fixed;
    if (fixed.empty()) {
      c.label = "baseline";
    } else {
      for (Param p : fixed) c.label += (c.label.empty() ? "" : "+") + std::string(param_name(p));
    }
    // same seed and stream for every subset: common random numbers
    const SampleMatrix m = draw_matrix(fix_at_mean(dists, fixed), N, seed, kStreamA);
    auto v = propagate(m, scenario).values(Scale::log10, RunoutPolicy::censor);
    if (v.empty()) throw NumericalError("kde comparison '" + c.label + "': every evaluation failed");
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    c.degenerate = *lo == *hi;
    c.point_value = *lo;
    if (!c.degenerate) c.curve.bandwidth = silverman_bandwidth(v);
    out.push_back(std::move(c));
    lives.push_back(std::move(v));
  }

  double h_min = INFINITY, h_max = 0.0, lo = INFINITY, hi = -INFINITY;
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (out[j].degenerate) continue;
    h_min = std::min(h_min, out[j].curve.bandwidth);
    h_max = std::max(h_max, out[j].curve.bandwidth);
    const auto [a, b] = std::minmax_element(lives[j].begin(), lives[j].end());
    lo = std::min(lo, *a);
    hi = std::max(hi, *b);
  }
  if (h_max == 0.0) return out;

  lo -= 5.0 * h_max;
  hi += 5.0 * h_max;
  const auto n = std::max<std::size_t>(512, static_cast<std::size_t>(std::ceil((hi - lo) / (0.25 * h_min))) + 1);
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (!out[j].degenerate) out[j].curve = kde(lives[j], grid, out[j].curve.bandwidth);
  }
  return out;
}

double sup_distance(const KdeCurve& a, const KdeCurve& b) {
  if (a.x != b.x) throw DomainError("sup_distance: curves are on different grids");
  double d = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) d = std::max(d, std::abs(a.density[i] - b.density[i]));
  return d;
}

}  // namespace fatigue
