#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fatigue {

/// Ti6Al4V-style material constants, ksi and dimensionless.
struct MaterialParams {
  double E = 16750.0;      ///< Young's modulus
  double nu = 0.33;        ///< Poisson ratio
  double C_y = 70.0;       ///< plastic (kinematic hardening) modulus
  double sigma_u = 137.5;  ///< ultimate strength, carried only
  double sigma_y = 95.0;   ///< yield stress, carried only
  double sigma_f = 27.0;   ///< fatigue limit, used as micro yield stress
  double S = 2.05;         ///< damage denominator
  double s = 2.05;         ///< damage exponent
  double p_d = 0.014;      ///< plastic strain threshold for damage
  double D_c = 0.31;       ///< critical damage

  /// Throws DomainError listing every violated bound.
  void validate() const;
};

/// Index of each parameter inside MaterialParams, in table order.
enum class Param : int { E, nu, C_y, sigma_u, sigma_y, sigma_f, S, s, p_d, D_c };

inline constexpr int kParamCount = 10;

inline constexpr std::array<std::string_view, kParamCount> kParamNames = {
    "E", "nu", "C_y", "sigma_u", "sigma_y", "sigma_f", "S", "s", "p_d", "D_c"};

std::optional<Param> param_from_name(std::string_view name);
std::string_view param_name(Param p);

double get(const MaterialParams& m, Param p);
void set(MaterialParams& m, Param p, double value);

/// Uniform prior ranges of the ten parameters.
struct ParamRange {
  double lo;
  double hi;
  constexpr double mid() const { return 0.5 * (lo + hi); }
};

inline constexpr std::array<ParamRange, kParamCount> kTableRanges = {{
    {16000.0, 17500.0},  // E
    {0.31, 0.35},        // nu
    {50.0, 90.0},        // C_y
    {130.0, 145.0},      // sigma_u
    {80.0, 110.0},       // sigma_y
    {22.0, 32.0},        // sigma_f
    {0.1, 4.0},          // S
    {0.1, 4.0},          // s
    {0.01, 0.018},       // p_d
    {0.25, 0.37},        // D_c
}};

/// All parameters at the midpoints of their ranges.
MaterialParams midpoint_params();

}  // namespace fatigue
