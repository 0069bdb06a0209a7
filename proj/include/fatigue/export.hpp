#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fatigue/calibration.hpp"
#include "fatigue/life_design.hpp"
#include "fatigue/sensitivity.hpp"

namespace fatigue {

/// Shortest text that reads back to the same double.
std::string format_double(double v);

/// row,<parameters>,N_f,runout[,error]
std::string ensemble_csv(const SampleMatrix& inputs, const OutputEnsemble& outputs);
/// parameter,S_T,q05,q95
std::string sensitivity_csv(const SensitivityResult& result);
/// label,x,density; degenerate curves appear as a single row with the point value and empty density
std::string kde_comparison_csv(const std::vector<KdeComparison>& curves);
/// step,<coordinates>,log_posterior,level; a log_sigma coordinate is written as sigma
std::string chain_csv(const PosteriorChain& chain);
PosteriorChain parse_chain_csv(std::string_view text);
/// parameter,x,density
std::string marginals_csv(const PosteriorChain& chain, const std::vector<KdeCurve>& marginals);
/// stress,R,mean_log10_life,q2.5,q97.5,q25,q75,runouts,all_runout
std::string sn_csv(const std::vector<SNPoint>& points);
/// log10_cycles,pdf,cdf
std::string distribution_csv(const LifeDistribution& dist);
/// phase,v,reliability
std::string design_trace_csv(const DesignResult& result);

}  // namespace fatigue
