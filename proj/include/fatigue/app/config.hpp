#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fatigue/calibration.hpp"
#include "fatigue/life_design.hpp"
#include "fatigue/sampling.hpp"

namespace fatigue::app {

struct SensitivitySection {
  std::size_t N = 1000;
  std::size_t bootstrap = 100;
  std::vector<std::vector<Param>> fixed_subsets{{Param::E, Param::nu}, {Param::S, Param::s}};
};

struct CalibrationSection {
  std::string data;  ///< dataset path, empty when given on the command line
  std::vector<Param> params{Param::S, Param::s};
  TemperingSettings tempering;
  std::vector<double> start{2.05, 2.05};
  std::vector<double> step{0.39, 0.39};
  bool bounded = false;
};

struct PredictionSection {
  std::string posterior;  ///< chain CSV; empty means the material values as a point posterior
  std::size_t M = 100;
  std::vector<double> stresses{80, 100, 120, 140, 160, 180, 200, 220, 240};
  BandKind band = BandKind::equal_tailed;
};

/// Everything a run needs besides the command and the output directory.
struct RunConfig {
  std::uint64_t seed = 1;
  MaterialParams material = midpoint_params();
  ParamSpace distributions = table_distributions();
  LoadSpec load;
  double residual_strain = 0.0;
  ModelOptions model;
  CycleJumpPolicy jump;
  SensitivitySection sensitivity;
  LikelihoodSpec likelihood;
  CalibrationSection calibration;
  PredictionSection prediction;
  ReliabilityQuery design;

  ForwardScenario scenario() const;
  ParamSpace priors() const;  ///< distributions of the calibrated parameters
};

/// Parse INI text. Relative paths resolve against `base_dir` and must exist.
/// Throws ConfigError listing every problem found.
RunConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig parse_config(const std::filesystem::path& path);

/// INI text that parses back to an equivalent configuration. Paths are written
/// as stored.
std::string serialize_config(const RunConfig& config);

}  // namespace fatigue::app
