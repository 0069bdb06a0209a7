#include "fatigue/material.hpp"

#include <sstream>

#include "fatigue/errors.hpp"

namespace fatigue {

void MaterialParams::validate() const {
  std::ostringstream errs;
  auto check = [&](bool ok, const char* what) {
    if (!ok) errs << (errs.tellp() > 0 ? "; " : "") << what;
  };
  check(E > 0, "E must be > 0");
  check(nu > 0 && nu < 0.5, "nu must lie in (0, 0.5)");
  check(C_y > 0, "C_y must be > 0");
  check(sigma_f > 0, "sigma_f must be > 0");
  check(S > 0, "S must be > 0");
  check(s > 0, "s must be > 0");
  check(p_d >= 0, "p_d must be >= 0");
  check(D_c > 0 && D_c < 1, "D_c must lie in (0, 1)");
  if (errs.tellp() > 0) throw DomainError("invalid material parameters: " + errs.str());
}

std::optional<Param> param_from_name(std::string_view name) {
  for (int i = 0; i < kParamCount; ++i) {
    if (kParamNames[static_cast<std::size_t>(i)] == name) return static_cast<Param>(i);
  }
  return std::nullopt;
}

std::string_view param_name(Param p) { return kParamNames[static_cast<std::size_t>(p)]; }

double get(const MaterialParams& m, Param p) {
  switch (p) {
    case Param::E: return m.E;
    case Param::nu: return m.nu;
    case Param::C_y: return m.C_y;
    case Param::sigma_u: return m.sigma_u;
    case Param::sigma_y: return m.sigma_y;
    case Param::sigma_f: return m.sigma_f;
    case Param::S: return m.S;
    case Param::s: return m.s;
    case Param::p_d: return m.p_d;
    case Param::D_c: return m.D_c;
  }
  return 0.0;
}

void set(MaterialParams& m, Param p, double value) {
  switch (p) {
    case Param::E: m.E = value; break;
    case Param::nu: m.nu = value; break;
    case Param::C_y: m.C_y = value; break;
    case Param::sigma_u: m.sigma_u = value; break;
    case Param::sigma_y: m.sigma_y = value; break;
    case Param::sigma_f: m.sigma_f = value; break;
    case Param::S: m.S = value; break;
    case Param::s: m.s = value; break;
    case Param::p_d: m.p_d = value; break;
    case Param::D_c: m.D_c = value; break;
  }
}

MaterialParams midpoint_params() {
  MaterialParams m;
  for (int i = 0; i < kParamCount; ++i) {
    set(m, static_cast<Param>(i), kTableRanges[static_cast<std::size_t>(i)].mid());
  }
  return m;
}

}  // namespace fatigue
