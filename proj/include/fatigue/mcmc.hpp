#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fatigue/random.hpp"

namespace fatigue {

using LogDensity = std::function<double(std::span<const double>)>;

/// Axis-aligned support; the prior is uniform on it.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dim() const { return lo.size(); }
  bool contains(std::span<const double> x) const;
  double width(std::size_t j) const { return hi[j] - lo[j]; }
  double log_volume() const;
  std::vector<double> center() const;
  void validate() const;
};

/// Samples in row-major order, grouped by tempering level.
struct PosteriorChain {
  std::vector<std::string> names;
  std::size_t dim = 0;
  std::vector<double> samples;
  std::vector<double> log_target;  ///< log prior + log likelihood, untempered
  std::vector<int> level;
  std::vector<double> alphas;      ///< tempering exponents, one per level
  std::vector<double> acceptance;  ///< per level
  std::vector<double> ess;         ///< effective sample size of the weights, per level
  std::vector<double> proposal_scale;  ///< per level, fraction of box width
  std::vector<int> degenerate_levels;
  bool zero_acceptance = false;
  std::uint64_t seed = 0;

  std::size_t size() const { return dim == 0 ? 0 : samples.size() / dim; }
  double operator()(std::size_t i, std::size_t j) const { return samples[i * dim + j]; }
  std::span<const double> row(std::size_t i) const { return {samples.data() + i * dim, dim}; }
  /// Column j restricted to the final level.
  std::vector<double> final_column(std::size_t j) const;
  /// Row indices of the final level.
  std::vector<std::size_t> final_rows() const;
};

/// Random-walk Metropolis with independent Gaussian increments of standard
/// deviation `step[j]`. Proposals outside `support` are rejected. The initial
/// state is not recorded; `length` states follow it.
PosteriorChain metropolis_chain(const LogDensity& target, std::span<const double> init,
                                std::span<const double> step, std::size_t length, std::uint64_t seed,
                                const Box& support);

/// Standard error of the mean by non-overlapping batch means.
double batch_means_se(std::span<const double> x, std::size_t batches = 20);

struct TemperingSettings {
  std::size_t samples_per_level = 1000;
  std::size_t steps_per_sample = 5;  ///< MH steps between recorded states
  std::vector<double> ladder;        ///< empty: (l/L)^2 with L = levels
  std::size_t levels = 10;
  double initial_scale = 0.2;        ///< proposal sd as a fraction of box width
  double target_acceptance_lo = 0.2;
  double target_acceptance_hi = 0.4;
  std::size_t pilot_rounds = 4;
  std::size_t pilot_chains = 20;
  std::size_t pilot_steps = 10;
  std::uint64_t seed = 1;

  std::vector<double> resolved_ladder() const;
};

/// Sequential tempering from the uniform prior on `support` to prior x
/// likelihood. Level 0 holds independent prior draws; each later level
/// resamples the previous one by its incremental weights and moves every
/// resampled state with Metropolis steps on the tempered target. Results do not
/// depend on the thread count.
PosteriorChain tempered_sample(const Box& support, const LogDensity& log_likelihood,
                               const TemperingSettings& settings);

}  // namespace fatigue
