#pragma once

// Conventions on the closed unit disk D.
//
//   area form      omega  = (1/pi) du ^ dv     (total mass 1)
//   Liouville form lambda = r^2/(2 pi) dtheta  (d lambda = omega)
//
// Every angle in the library is measured in turns (1 turn = 2 pi radians).

#include <Eigen/Core>

#include <cmath>
#include <compare>
#include <numbers>
#include <span>

namespace calabi {

using Point = Eigen::Vector2d;
using Tangent = Eigen::Vector2d;
using Jacobian = Eigen::Matrix2d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kBoundaryTol = 1e-9;
inline constexpr double kZeroVectorTol = 1e-12;

struct Turns {
  double value = 0.0;

  constexpr Turns() = default;
  constexpr explicit Turns(double v) : value(v) {}

  constexpr double radians() const { return value * kTwoPi; }

  constexpr Turns& operator+=(Turns o) { value += o.value; return *this; }
  constexpr Turns& operator-=(Turns o) { value -= o.value; return *this; }
  friend constexpr Turns operator+(Turns a, Turns b) { return Turns(a.value + b.value); }
  friend constexpr Turns operator-(Turns a, Turns b) { return Turns(a.value - b.value); }
  friend constexpr Turns operator-(Turns a) { return Turns(-a.value); }
  friend constexpr Turns operator*(double s, Turns a) { return Turns(s * a.value); }
  friend constexpr Turns operator*(Turns a, double s) { return Turns(s * a.value); }
  friend constexpr Turns operator/(Turns a, double s) { return Turns(a.value / s); }
  friend constexpr auto operator<=>(Turns, Turns) = default;
};

/// Density of omega against Lebesgue measure du dv.
template <typename Derived>
typename Derived::Scalar area_density(const Eigen::MatrixBase<Derived>&) {
  using Scalar = typename Derived::Scalar;
  return Scalar(1) / Scalar(kPi);
}

/// lambda_z(w) = (u dv - v du) / (2 pi).
template <typename DerivedZ, typename DerivedW>
typename DerivedZ::Scalar liouville_eval(const Eigen::MatrixBase<DerivedZ>& z,
                                         const Eigen::MatrixBase<DerivedW>& w) {
  using Scalar = typename DerivedZ::Scalar;
  return (z(0) * w(1) - z(1) * w(0)) / Scalar(kTwoPi);
}

/// Signed principal angle from a to b, in turns, in (-1/2, 1/2].
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar turn_gap(const Eigen::MatrixBase<DerivedA>& a,
                                   const Eigen::MatrixBase<DerivedB>& b) {
  using std::atan2;
  const auto cross = a(0) * b(1) - a(1) * b(0);
  const auto dot = a.dot(b);
  return atan2(cross, dot) / typename DerivedA::Scalar(kTwoPi);
}

/// Unit vector at angle x turns.
inline Point circle_point(double x) {
  return Point(std::cos(kTwoPi * x), std::sin(kTwoPi * x));
}

/// Radially projects points within kBoundaryTol outside the disk back onto S^1.
/// Returns false when the point lies further out than the tolerance.
inline bool project_to_disk(Point& z) {
  const double r = z.norm();
  if (r <= 1.0) return true;
  if (r <= 1.0 + kBoundaryTol) {
    z /= r;
    return true;
  }
  return false;
}

/// Total continuous argument variation along a sequence of nonzero vectors.
/// Throws ZeroVector for a vector shorter than kZeroVectorTol and StepTooCoarse
/// when a consecutive pair is a quarter turn or more apart.
Turns unwrap_angle(std::span<const Tangent> path);

}  // namespace calabi
