#include "fatigue/damage_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fatigue/errors.hpp"

namespace fatigue {

namespace {

constexpr double kSingularityTol = 1e-9;
constexpr double kReturnTol = 1e-11;     // Newton target, relative to sigma_f
constexpr double kReturnAccept = 1e-9;   // hard acceptance bound, relative to sigma_f

// Fraction of the trial increment that is elastic: the smallest alpha in
// [0, 1] where the trial over-stress reaches the yield surface.
double yield_onset(const SymTensor3& elastic, const SymTensor3& increment, const SymTensor3& back,
                   const MaterialParams& params) {
  const SymTensor3 o0 = hooke_stress(elastic, params.E, params.nu).deviator() - back;
  const SymTensor3 d = hooke_stress(increment, params.E, params.nu).deviator();
  const double A = 1.5 * contract(d, d);
  const double B = 3.0 * contract(o0, d);
  const double C = 1.5 * contract(o0, o0) - params.sigma_f * params.sigma_f;
  if (C >= 0.0 || A <= 0.0) return 0.0;
  const double alpha = (-B + std::sqrt(B * B - 4.0 * A * C)) / (2.0 * A);
  return std::clamp(alpha, 0.0, 1.0);
}

}  // namespace

void LoadSpec::validate() const {
  std::ostringstream errs;
  auto check = [&](bool ok, const char* what) {
    if (!ok) errs << (errs.tellp() > 0 ? "; " : "") << what;
  };
  check(sigma_max > 0, "sigma_max must be > 0");
  check(R < 1, "R must be < 1");
  check(n_inc >= 2, "n_inc must be >= 2");
  check(N_cap >= 1, "N_cap must be >= 1");
  if (errs.tellp() > 0) throw DomainError("invalid load: " + errs.str());
}

SymTensor3 design_strain_direction() {
  // Trace-free, compressive along the loading axis x.
  return {-1.0, 0.5, 0.5, 0.0, 0.0, 0.0};
}

DesignSpec DesignSpec::from_magnitude(double v) {
  return DesignSpec{v * design_strain_direction()};
}

EshelbyConstants eshelby_constants(double nu) {
  if (!(nu > 0.0 && nu <= 0.5)) {
    throw DomainError("eshelby_constants: Poisson ratio must lie in (0, 0.5]");
  }
  return {(1.0 + nu) / (3.0 * (1.0 - nu)), (2.0 / 15.0) * (4.0 - 5.0 * nu) / (1.0 - nu)};
}

LocalizedStrain localize(const SymTensor3& meso_strain, const SymTensor3& meso_plastic,
                         const SymTensor3& micro_plastic, double D, double nu) {
  const auto [a, b] = eshelby_constants(nu);
  if (D < 0.0) throw DomainError("localize: damage must be >= 0");
  const double dev_den = 1.0 - b * D;
  const double hyd_den = 1.0 - a * D;
  if (dev_den <= kSingularityTol || hyd_den <= kSingularityTol) {
    throw NumericalError("localize: singular scale transition at D = " + std::to_string(D));
  }
  LocalizedStrain out;
  out.deviatoric =
      (meso_strain.deviator() + b * ((1.0 - D) * micro_plastic - meso_plastic)) / dev_den;
  out.hydrostatic = meso_strain.hydrostatic() / hyd_den;
  return out;
}

SymTensor3 effective_stress(const SymTensor3& stress, double D) {
  if (D < 0.0) throw DomainError("effective_stress: damage must be >= 0");
  if (D >= 1.0 - kSingularityTol) {
    throw NumericalError("effective_stress: damage too close to 1");
  }
  return stress / (1.0 - D);
}

SymTensor3 hooke_stress(const SymTensor3& strain, double E, double nu) {
  const double two_g = E / (1.0 + nu);
  const double lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  return two_g * strain + (lambda * strain.trace()) * SymTensor3::identity();
}

SymTensor3 hooke_strain(const SymTensor3& stress, double E, double nu) {
  return ((1.0 + nu) / E) * stress - (nu / E * stress.trace()) * SymTensor3::identity();
}

double energy_release_rate(const SymTensor3& effective, double E, double nu, EnergyForm form) {
  if (!(E > 0.0)) throw DomainError("energy_release_rate: E must be > 0");
  const double shear_coef = form == EnergyForm::standard ? (1.0 + nu) / (2.0 * E) : (1.0 + nu) / E;
  const double tr = effective.trace();
  return shear_coef * contract(effective, effective) - nu / (2.0 * E) * tr * tr;
}

double yield_function(const SymTensor3& effective, const SymTensor3& back_stress, double sigma_f) {
  const SymTensor3 over = effective.deviator() - back_stress;
  return std::sqrt(1.5 * contract(over, over)) - sigma_f;
}

double yield_function(const MicroState& state, const MaterialParams& params) {
  return yield_function(hooke_stress(state.elastic_strain, params.E, params.nu), state.back_stress,
                        params.sigma_f);
}

ReturnMapResult return_map(const MicroState& state, const SymTensor3& trial_increment,
                           const MaterialParams& params, const ModelOptions& options) {
  ReturnMapResult out;
  out.state = state;
  MicroState& st = out.state;
  st.elastic_strain += trial_increment;

  const SymTensor3 trial_stress = hooke_stress(st.elastic_strain, params.E, params.nu);
  const SymTensor3 over = trial_stress.deviator() - st.back_stress;
  const SymTensor3 start_elastic = state.elastic_strain;
  const double over_eq = std::sqrt(1.5 * contract(over, over));
  double f = over_eq - params.sigma_f;
  if (f <= 0.0) return out;

  out.plastic = true;
  const double D = st.D;
  const double b = eshelby_constants(params.nu).b;
  const double shear = params.E / (2.0 * (1.0 + params.nu));
  // Micro elastic strain lost per unit of plastic strain, after the
  // localization feedback of the plastic strain itself.
  const double accommodation = (1.0 - b) / (1.0 - b * D);
  const double hardening = params.C_y * (1.0 - D);
  const double slope = 3.0 * shear * accommodation + hardening;
  const SymTensor3 flow = (1.5 / over_eq) * over;

  const SymTensor3 e0 = st.elastic_strain;
  const SymTensor3 x0 = st.back_stress;
  double dp = 0.0;
  int it = 0;
  while (it < options.max_return_iterations) {
    ++it;
    dp += f / slope;
    st.elastic_strain = e0 - (accommodation * dp) * flow;
    st.back_stress = x0 + ((2.0 / 3.0) * hardening * dp) * flow;
    f = yield_function(hooke_stress(st.elastic_strain, params.E, params.nu), st.back_stress,
                       params.sigma_f);
    if (std::abs(f) <= kReturnTol * params.sigma_f) break;
  }
  out.iterations = it;
  if (!(std::abs(f) <= kReturnAccept * params.sigma_f) || !(dp >= 0.0)) {
    throw NumericalError("return_map: no convergence after " + std::to_string(it) +
                         " iterations, residual " + std::to_string(f));
  }

  st.plastic_strain += dp * flow;
  const double p_old = st.p;
  st.p += dp;
  out.delta_p = dp;

  if (options.damage_enabled && st.p > params.p_d && st.D < params.D_c) {
    // Trapezoidal rule in p between the onset of yielding (or the threshold
    // p_d) and the end of the increment, with Y taken linear in p.
    const double p_from = std::max(p_old, params.p_d);
    const double active = st.p - p_from;
    const auto rate = [&](const SymTensor3& elastic) {
      const SymTensor3 eff = hooke_stress(elastic, params.E, params.nu);
      return energy_release_rate(eff, params.E, params.nu, options.energy);
    };
    const double alpha = yield_onset(start_elastic, trial_increment, state.back_stress, params);
    const double Y_onset = rate(start_elastic + alpha * trial_increment);
    const double Y_end = rate(st.elastic_strain);
    const double Y_from = Y_onset + (Y_end - Y_onset) * (p_from - p_old) / dp;
    const double dD =
        0.5 * (std::pow(Y_from / params.S, params.s) + std::pow(Y_end / params.S, params.s)) * active;
    const double D_new = std::min(st.D + dD, params.D_c);
    out.delta_D = D_new - st.D;
    st.D = D_new;
  }
  return out;
}

ReturnMapResult advance_to_stress(const MicroState& state, double sigma, const DesignSpec& design,
                                  const MaterialParams& params, const ModelOptions& options) {
  const SymTensor3& residual = design.residual_plastic_strain;
  const SymTensor3 meso_strain =
      hooke_strain(SymTensor3::uniaxial(sigma), params.E, params.nu) + residual;
  const LocalizedStrain micro =
      localize(meso_strain, residual, state.plastic_strain, state.D, params.nu);
  const SymTensor3 trial = micro.total() - (state.elastic_strain + state.plastic_strain);
  return return_map(state, trial, params, options);
}

MicroState initial_state(const LoadSpec& load, const DesignSpec& design,
                         const MaterialParams& params, const ModelOptions& options) {
  MicroState st;
  ModelOptions install = options;
  install.damage_enabled = false;
  st = advance_to_stress(st, 0.0, design, params, install).state;
  for (int k = 1; k <= load.n_inc; ++k) {
    const double sigma = load.sigma_max * static_cast<double>(k) / load.n_inc;
    st = advance_to_stress(st, sigma, design, params, options).state;
  }
  return st;
}

CycleResult simulate_cycle(const MicroState& state, const LoadSpec& load, const DesignSpec& design,
                           const MaterialParams& params, const ModelOptions& options) {
  CycleResult out;
  out.state = state;
  const double hi = load.sigma_max;
  const double lo = load.sigma_min();
  const int n = load.n_inc;
  for (int half = 0; half < 2; ++half) {
    const double from = half == 0 ? hi : lo;
    const double to = half == 0 ? lo : hi;
    for (int k = 1; k <= n; ++k) {
      const double sigma = k == n ? to : from + (to - from) * static_cast<double>(k) / n;
      const ReturnMapResult step = advance_to_stress(out.state, sigma, design, params, options);
      out.state = step.state;
      out.delta_D += step.delta_D;
      out.delta_p += step.delta_p;
      if (out.state.D >= params.D_c) return out;
    }
  }
  return out;
}

LifeResult simulate_life(const LoadSpec& load, const DesignSpec& design,
                         const MaterialParams& params, const CycleJumpPolicy& jump,
                         const ModelOptions& options) {
  load.validate();
  params.validate();

  LifeResult life;
  MicroState st = initial_state(load, design, params, options);
  if (st.D >= params.D_c) {
    life.N_f = 1;
    life.D_final = st.D;
    return life;
  }

  const double target = jump.target_fraction * params.D_c;
  std::int64_t N = 0;
  while (N < load.N_cap) {
    const CycleResult cyc = simulate_cycle(st, load, design, params, options);
    st = cyc.state;
    ++N;
    ++life.integrated_cycles;
    if (st.D >= params.D_c) {
      life.N_f = N;
      life.D_final = st.D;
      return life;
    }
    // Elastic shakedown: every later cycle repeats this one exactly.
    if (cyc.delta_p == 0.0) break;

    if (!jump.enabled || life.integrated_cycles < jump.warmup_cycles) continue;

    std::int64_t dN = 0;
    if (cyc.delta_D > 0.0) {
      const double to_failure = (params.D_c - st.D) / cyc.delta_D;
      const double steps = std::floor(target / cyc.delta_D);
      if (steps >= to_failure) {
        // Failure falls inside this jump.
        const auto n_cross = static_cast<std::int64_t>(std::ceil(to_failure));
        if (N + n_cross <= load.N_cap) {
          life.N_f = N + n_cross;
          life.D_final = params.D_c;
          return life;
        }
        dN = load.N_cap - N;
      } else {
        dN = std::max<std::int64_t>(1, static_cast<std::int64_t>(
                                           std::min(steps, static_cast<double>(load.N_cap))));
      }
    } else if (st.p < params.p_d) {
      // Damage still gated by the plastic threshold: skip to the crossing.
      const double steps = std::floor((params.p_d - st.p) / cyc.delta_p);
      dN = static_cast<std::int64_t>(std::min(steps, static_cast<double>(load.N_cap)));
    }
    if (dN <= 0) continue;
    dN = std::min(dN, load.N_cap - N);
    N += dN;
    st.D += static_cast<double>(dN) * cyc.delta_D;
    st.p += static_cast<double>(dN) * cyc.delta_p;
  }
  life.N_f = load.N_cap;
  life.runout = true;
  life.D_final = st.D;
  return life;
}

}  // namespace fatigue
