#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace fatigue {

/// Symmetric second-order 3x3 tensor. Only the six independent components
/// are stored, in the order xx, yy, zz, yz, xz, xy.
class SymTensor3 {
public:
  constexpr SymTensor3() = default;
  constexpr SymTensor3(double xx, double yy, double zz, double yz, double xz,
                       double xy)
      : c_{xx, yy, zz, yz, xz, xy} {}

  static constexpr SymTensor3 identity() { return {1, 1, 1, 0, 0, 0}; }
  static constexpr SymTensor3 uniaxial(double v) { return {v, 0, 0, 0, 0, 0}; }

  constexpr double xx() const { return c_[0]; }
  constexpr double yy() const { return c_[1]; }
  constexpr double zz() const { return c_[2]; }
  constexpr double yz() const { return c_[3]; }
  constexpr double xz() const { return c_[4]; }
  constexpr double xy() const { return c_[5]; }

  constexpr double operator[](std::size_t i) const { return c_[i]; }
  constexpr double& operator[](std::size_t i) { return c_[i]; }

  /// Full-tensor access, i and j in [0, 3).
  constexpr double operator()(int i, int j) const {
    if (i == j) return c_[static_cast<std::size_t>(i)];
    return c_[static_cast<std::size_t>(6 - i - j)];
  }

  constexpr double trace() const { return c_[0] + c_[1] + c_[2]; }
  /// Hydrostatic (spherical) part, tr/3.
  constexpr double hydrostatic() const { return trace() / 3.0; }
  constexpr SymTensor3 deviator() const {
    const double h = hydrostatic();
    return {c_[0] - h, c_[1] - h, c_[2] - h, c_[3], c_[4], c_[5]};
  }

  constexpr SymTensor3& operator+=(const SymTensor3& o) {
    for (std::size_t i = 0; i < 6; ++i) c_[i] += o.c_[i];
    return *this;
  }
  constexpr SymTensor3& operator-=(const SymTensor3& o) {
    for (std::size_t i = 0; i < 6; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  constexpr SymTensor3& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  constexpr SymTensor3& operator/=(double s) {
    for (auto& v : c_) v /= s;
    return *this;
  }

  friend constexpr SymTensor3 operator+(SymTensor3 a, const SymTensor3& b) { return a += b; }
  friend constexpr SymTensor3 operator-(SymTensor3 a, const SymTensor3& b) { return a -= b; }
  friend constexpr SymTensor3 operator-(SymTensor3 a) { return a *= -1.0; }
  friend constexpr SymTensor3 operator*(SymTensor3 a, double s) { return a *= s; }
  friend constexpr SymTensor3 operator*(double s, SymTensor3 a) { return a *= s; }
  friend constexpr SymTensor3 operator/(SymTensor3 a, double s) { return a /= s; }
  friend constexpr bool operator==(const SymTensor3&, const SymTensor3&) = default;

private:
  std::array<double, 6> c_{};
};

/// Double contraction a:b over all nine components.
constexpr double contract(const SymTensor3& a, const SymTensor3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] +
         2.0 * (a[3] * b[3] + a[4] * b[4] + a[5] * b[5]);
}

/// Frobenius norm, sqrt(a:a).
inline double norm(const SymTensor3& a) { return std::sqrt(contract(a, a)); }

/// von Mises equivalent, sqrt(3/2 dev(a):dev(a)).
inline double von_mises(const SymTensor3& a) {
  const SymTensor3 d = a.deviator();
  return std::sqrt(1.5 * contract(d, d));
}

}  // namespace fatigue
