#pragma once

#include <cstdint>

#include "fatigue/material.hpp"
#include "fatigue/tensor.hpp"

namespace fatigue {

/// Internal variables of the micro-scale inclusion.
struct MicroState {
  SymTensor3 elastic_strain;  ///< micro elastic strain
  SymTensor3 plastic_strain;  ///< micro plastic strain
  SymTensor3 back_stress;     ///< kinematic hardening tensor, ksi
  double p = 0.0;             ///< accumulated micro plastic strain
  double D = 0.0;             ///< damage
};

/// Constant-amplitude cyclic loading at the hotspot.
struct LoadSpec {
  double sigma_max = 100.0;  ///< maximum local stress, ksi
  double R = 0.1;            ///< sigma_min / sigma_max
  int n_inc = 20;            ///< increments per half cycle
  std::int64_t N_cap = 10'000'000;

  double sigma_min() const { return R * sigma_max; }
  void validate() const;
};

/// Surface-treatment design variables.
struct DesignSpec {
  SymTensor3 residual_plastic_strain;  ///< meso residual plastic strain

  /// Compressive treatment of scalar magnitude `v`, see design_strain_direction().
  static DesignSpec from_magnitude(double v);
  /// Untreated surface.
  static DesignSpec none() { return {}; }
};

/// Unit-magnitude direction used by DesignSpec::from_magnitude.
SymTensor3 design_strain_direction();

enum class EnergyForm {
  standard,    ///< (1+nu)/(2E) sig:sig - nu/(2E) (tr sig)^2
  as_printed,  ///< (1+nu)/E sig:sig - nu/(2E) (tr sig)^2
};

struct ModelOptions {
  EnergyForm energy = EnergyForm::standard;
  bool damage_enabled = true;
  int max_return_iterations = 20;
};

struct EshelbyConstants {
  double a;
  double b;
};

/// Localization constants of the Eshelby-Kroner scale transition.
EshelbyConstants eshelby_constants(double nu);

struct LocalizedStrain {
  SymTensor3 deviatoric;  ///< micro deviatoric strain
  double hydrostatic;     ///< micro hydrostatic strain, tr/3

  SymTensor3 total() const { return deviatoric + hydrostatic * SymTensor3::identity(); }
};

/// Meso to micro strain localization. `meso_strain` is the total meso strain,
/// `meso_plastic` its plastic part.
LocalizedStrain localize(const SymTensor3& meso_strain, const SymTensor3& meso_plastic,
                         const SymTensor3& micro_plastic, double D, double nu);

/// Damage-effective stress sigma / (1 - D).
SymTensor3 effective_stress(const SymTensor3& stress, double D);

/// Isotropic Hooke's law and its inverse.
SymTensor3 hooke_stress(const SymTensor3& strain, double E, double nu);
SymTensor3 hooke_strain(const SymTensor3& stress, double E, double nu);

/// Damage energy release rate from the effective stress, ksi.
double energy_release_rate(const SymTensor3& effective, double E, double nu,
                           EnergyForm form = EnergyForm::standard);

/// von Mises equivalent of the over-stress (dev(effective) - back_stress), minus sigma_f.
/// Only the deviatoric part of `effective` is used.
double yield_function(const SymTensor3& effective, const SymTensor3& back_stress, double sigma_f);

/// Yield function evaluated on a micro state.
double yield_function(const MicroState& state, const MaterialParams& params);

struct ReturnMapResult {
  MicroState state;
  double delta_p = 0.0;
  double delta_D = 0.0;
  bool plastic = false;
  int iterations = 0;
};

/// Elastic predictor / radial-return corrector for one micro increment.
/// `trial_increment` is the micro total-strain increment assuming fixed plastic strain.
ReturnMapResult return_map(const MicroState& state, const SymTensor3& trial_increment,
                           const MaterialParams& params, const ModelOptions& options = {});

struct CycleResult {
  MicroState state;
  double delta_D = 0.0;  ///< damage accrued over the cycle
  double delta_p = 0.0;  ///< plastic strain accrued over the cycle
};

/// Micro state after installing the residual plastic strain (no damage during
/// installation) and ramping the load from zero to sigma_max.
MicroState initial_state(const LoadSpec& load, const DesignSpec& design,
                         const MaterialParams& params, const ModelOptions& options = {});

/// Advance the micro state to the given meso stress level (uniaxial hotspot stress).
ReturnMapResult advance_to_stress(const MicroState& state, double sigma, const DesignSpec& design,
                                  const MaterialParams& params, const ModelOptions& options = {});

/// One load cycle sigma_max -> sigma_min -> sigma_max.
CycleResult simulate_cycle(const MicroState& state, const LoadSpec& load, const DesignSpec& design,
                           const MaterialParams& params, const ModelOptions& options = {});

struct CycleJumpPolicy {
  bool enabled = true;
  double target_fraction = 0.01;  ///< damage target per jump, as a fraction of D_c
  int warmup_cycles = 2;          ///< exact cycles before the first jump

  static CycleJumpPolicy disabled() { return {false, 0.01, 0}; }
};

struct LifeResult {
  std::int64_t N_f = 0;  ///< cycles to crack initiation, or N_cap on runout
  bool runout = false;
  double D_final = 0.0;
  std::int64_t integrated_cycles = 0;  ///< cycles integrated exactly
};

/// Cycles to reach the critical damage under constant-amplitude loading.
LifeResult simulate_life(const LoadSpec& load, const DesignSpec& design,
                         const MaterialParams& params, const CycleJumpPolicy& jump = {},
                         const ModelOptions& options = {});

}  // namespace fatigue
