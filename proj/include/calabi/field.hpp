#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "calabi/geometry.hpp"

namespace calabi {

/// Autonomous radial Hamiltonian H(z) = g(|z|^2), with g and its first two
/// derivatives in s = |z|^2. Its flow is the rigid rotation of every circle
/// |z| = r by -g'(r^2) turns per unit time.
struct RadialProfile {
  std::function<double(double)> value;
  std::function<double(double)> slope;
  std::function<double(double)> curvature;
  /// int_0^1 g(s) ds, when known in closed form.
  std::optional<double> integral;
};

/// Time-dependent generator H(t, z), t in [0, 1] (extended 1-periodically).
/// gradient and hessian are optional; missing derivatives are replaced by
/// central differences with step 1e-5 (1 + |z|).
struct HamiltonianField {
  std::string name;
  std::vector<std::pair<std::string, double>> parameters;
  std::function<double(double, const Point&)> value;
  std::function<Eigen::Vector2d(double, const Point&)> gradient;
  std::function<Eigen::Matrix2d(double, const Point&)> hessian;
  std::optional<RadialProfile> radial;
  bool autonomous = false;
};

double evaluate(const HamiltonianField& field, double t, const Point& z);
Eigen::Vector2d gradient(const HamiltonianField& field, double t, const Point& z);
Eigen::Matrix2d hessian(const HamiltonianField& field, double t, const Point& z);

/// X_t with dH_t = omega(X_t, .), i.e. X = pi (dH/dv, -dH/du).
Tangent hamiltonian_vector_field(const HamiltonianField& field, double t, const Point& z);

/// Derivative of the vector field with respect to z.
Eigen::Matrix2d vector_field_jacobian(const HamiltonianField& field, double t,
                                      const Point& z);

/// max - min of H_t over `samples` equally spaced points of S^1.
double boundary_variation(const HamiltonianField& field, double t, int samples = 64);

/// Builds the field H(z) = g(|z|^2) with analytic derivatives.
HamiltonianField radial_field(std::string name,
                              std::vector<std::pair<std::string, double>> parameters,
                              RadialProfile profile);

/// The field factor * H (same flow, time rescaled by factor).
HamiltonianField scaled(const HamiltonianField& field, double factor);

inline double finite_difference_step(const Point& z) { return 1e-5 * (1.0 + z.norm()); }

}  // namespace calabi
