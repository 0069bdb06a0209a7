#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fatigue/density.hpp"
#include "fatigue/ensemble.hpp"
#include "fatigue/mcmc.hpp"

namespace fatigue {

/// Chain holding a single state: every draw returns `values`.
PosteriorChain point_posterior(std::vector<std::string> names, std::vector<double> values);

/// M parameter sets drawn uniformly from the final level of the chain. Chain
/// coordinates named after material parameters override `base`; others (the
/// noise scale) are ignored.
std::vector<MaterialParams> posterior_draws(const PosteriorChain& chain, const MaterialParams& base,
                                            std::size_t M, std::uint64_t seed);

enum class BandKind { equal_tailed, highest_density };

struct SNPoint {
  double stress = 0.0;
  double R = 0.0;
  double mean_log10 = 0.0;
  double lo95 = 0.0;  ///< cycles
  double hi95 = 0.0;
  double lo50 = 0.0;
  double hi50 = 0.0;
  std::size_t runouts = 0;
  std::size_t failures = 0;
  bool all_runout = false;
};

struct PredictionSettings {
  MaterialParams base;      ///< values of parameters the chain does not carry
  LoadSpec load;            ///< n_inc and N_cap; sigma_max and R set per call
  DesignSpec design;
  CycleJumpPolicy jump;
  ModelOptions model;
  std::size_t M = 100;
  std::uint64_t seed = 1;
  BandKind band = BandKind::equal_tailed;
};

/// Predictive lives at each stress with the same M posterior draws at every level.
std::vector<SNPoint> sn_curve(const PosteriorChain& posterior, std::span<const double> stresses, double R,
                              const PredictionSettings& settings);

struct LifeDistribution {
  OutputEnsemble lives;
  bool degenerate = false;
  KdeCurve pdf;                   ///< over log10 cycles; empty when degenerate
  std::vector<double> grid;       ///< log10 cycles
  std::vector<double> cdf;        ///< P(N_f <= 10^grid)
};

/// Density and distribution function of M predictive lives under settings.load.
LifeDistribution life_distribution(const PosteriorChain& posterior, const PredictionSettings& settings);

/// Fraction of non-failed lives with N_f >= N_target. Runouts sit at N_cap.
double reliability(const OutputEnsemble& lives, double N_target);

struct ReliabilityQuery {
  double N_target = 50000.0;
  double rho = 0.85;
  double v_lo = 0.0;
  double v_hi = 0.3;
  double tol_p = 0.02;
  double bracket_tol = 1e-4;
  std::size_t scan_points = 8;
  void validate() const;
};

struct DesignPoint {
  double v = 0.0;
  double reliability = 0.0;
};

struct DesignResult {
  double v = 0.0;
  double achieved = 0.0;  ///< estimated reliability at v
  double mc_error = 0.0;  ///< binomial standard error of `achieved`
  std::vector<DesignPoint> scan;   ///< coarse scan, ascending v
  std::vector<DesignPoint> trace;  ///< bracket ends then bisection iterates
  bool non_monotone = false;       ///< reliability fell with v beyond MC noise
  std::string termination;
};

/// Smallest residual strain magnitude whose estimated reliability reaches rho.
/// One set of posterior draws serves every iterate. Throws DomainError when no
/// scanned magnitude reaches rho.
DesignResult inverse_design(const ReliabilityQuery& query, const PosteriorChain& posterior,
                            const PredictionSettings& settings);

std::string design_report(const ReliabilityQuery& query, const PredictionSettings& settings,
                          const DesignResult& result);

}  // namespace fatigue
