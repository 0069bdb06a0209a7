#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fatigue/density.hpp"
#include "fatigue/ensemble.hpp"
#include "fatigue/sampling.hpp"

namespace fatigue {

/// A with column i taken from B.
SampleMatrix build_radial_matrix(const SampleMatrix& A, const SampleMatrix& B, std::size_t i);

/// Total-effect index of one factor from the base outputs Y_A and the outputs
/// Y_Di of the matrix differing from A in that factor only. Outputs are centred
/// on mean(Y_A) first, which makes the estimate invariant to shifts and scaling.
double total_effect(std::span<const double> Y_A, std::span<const double> Y_D);

struct SensitivityResult {
  std::vector<std::string> names;
  std::vector<double> S_T;
  std::vector<double> q05;  ///< bootstrap quantiles
  std::vector<double> q95;
  std::size_t N = 0;
  std::size_t evaluations = 0;
  std::size_t excluded_rows = 0;  ///< rows dropped because some evaluation failed

  /// Factor indices ordered by decreasing S_T.
  std::vector<std::size_t> ranking() const;
};

struct SaltelliOptions {
  std::uint64_t seed = 1;
  std::size_t bootstrap = 100;
};

/// Stream identifiers used by the Saltelli design.
inline constexpr std::uint64_t kStreamA = 1;
inline constexpr std::uint64_t kStreamB = 2;
inline constexpr std::uint64_t kStreamBootstrap = 3;

/// A, B and the k radial matrices.
struct SaltelliDesign {
  SampleMatrix A;
  SampleMatrix B;
  std::vector<SampleMatrix> D;
};
SaltelliDesign make_saltelli_design(std::span<const Marginal> laws, std::size_t N, std::uint64_t seed);

/// Indices from outputs on A and on each D_i. Rows where any output is NaN are
/// dropped from every estimate.
SensitivityResult estimate_total_effects(std::span<const double> Y_A,
                                         const std::vector<std::vector<double>>& Y_D,
                                         std::vector<std::string> names,
                                         const SaltelliOptions& opts);

using RowModel = std::function<double(std::span<const double>)>;

/// Total-effect indices of an arbitrary model over independent factors, with
/// (k + 2) N model evaluations.
SensitivityResult saltelli_total_effects(std::span<const Marginal> laws,
                                         std::vector<std::string> names, std::size_t N,
                                         const RowModel& model, const SaltelliOptions& opts = {});

/// Indices of the fatigue life on log10 and linear scales, from one set of
/// evaluations. Runouts are censored at N_cap.
struct SensitivityStudy {
  SensitivityResult log10;
  SensitivityResult linear;
  OutputEnsemble base_outputs;
};
SensitivityStudy run_sensitivity_study(const ParamSpace& dists, const ForwardScenario& scenario,
                                       std::size_t N, const SaltelliOptions& opts = {});

/// Lives against each sampled parameter.
struct ScatterStudy {
  SampleMatrix inputs;
  OutputEnsemble outputs;
};
ScatterStudy scatter_study(const ParamSpace& dists, const ForwardScenario& scenario, std::size_t N,
                           std::uint64_t seed);

struct KdeComparison {
  std::string label;
  std::vector<Param> fixed;
  KdeCurve curve;            ///< empty when degenerate
  bool degenerate = false;   ///< every usable life identical
  double point_value = 0.0;  ///< the common log10 life when degenerate
};

/// Baseline life KDE plus one curve per subset of parameters fixed at their
/// means. Every run reuses the same draws, and all curves share one grid.
std::vector<KdeComparison> kde_compare_study(const ParamSpace& dists, const ForwardScenario& scenario,
                                             std::size_t N,
                                             const std::vector<std::vector<Param>>& fixed_subsets,
                                             std::uint64_t seed);

/// Largest absolute difference between two curves sampled on the same grid.
double sup_distance(const KdeCurve& a, const KdeCurve& b);

}  // namespace fatigue
