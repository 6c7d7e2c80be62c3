#pragma once

// Built-in map families with closed-form reference values.

#include <map>
#include <string>
#include <vector>

#include "calabi/field.hpp"
#include "calabi/flow.hpp"
#include "calabi/geometry.hpp"

namespace calabi {

/// Polynomial in s = |z|^2 with ascending coefficients.
struct Polynomial {
  std::vector<double> coefficients;

  double operator()(double s) const;
  Polynomial derivative() const;
  /// int_0^1 g(s) ds
  double unit_integral() const;
};

/// Smooth plateau profile: 1 on [0, 1/2], 0 on [1, inf), joined by the quintic
/// smootherstep (C^2). Returns psi, psi' or psi'' for order 0, 1, 2.
double plateau(double x, int order = 0);
/// c_n with int_0^1 c_n plateau(n r) 2 pi r dr = 1.
double bump_constant(int n);

HamiltonianField rotation_field(double alpha);
/// H = g(|z|^2). Throws BoundaryNotConstant unless g(1) = 0.
HamiltonianField twist_field(const Polynomial& g);
/// H = c_n plateau(n |z|).
HamiltonianField bump_field(int n);
/// H = beta (1 - |z|^2)(1 + gamma u): a non-radial field vanishing on S^1.
HamiltonianField tilted_field(double beta, double gamma);

MapBundle identity_map();
/// Time-tau map of an arbitrary field, with closed forms when it is radial.
MapBundle flow_bundle(const HamiltonianField& field, double tau = 1.0,
                      const FlowControls& controls = {});

MapBundle rotation(Turns alpha);
MapBundle radial_twist(const Polynomial& g);
MapBundle bump(int n);
/// h o R_alpha o h^{-1} for h the time-tau map of `conjugator`.
MapBundle conjugated_rotation(Turns alpha, const HamiltonianField& conjugator, double tau,
                              const FlowControls& controls = {});

/// a o b: the isotopy of b followed by that of a.
MapBundle compose(const MapBundle& a, const MapBundle& b);
MapBundle iterate(const MapBundle& a, int n);
MapBundle inverse(const MapBundle& a);

/// Serializable description of a family member.
///
///   rotation             alpha
///   radial_twist         coefficients (g in ascending powers of s)
///   bump                 n
///   tilted               beta, gamma, tau
///   conjugated_rotation  alpha, tau, operands[0] = conjugator field
///   composition          operands (outermost first)
///   iterate              n, operands[0]
///   inverse              operands[0]
///   identity
struct FamilySpec {
  std::string family;
  std::map<std::string, double> parameters;
  std::vector<double> coefficients;
  std::vector<FamilySpec> operands;

  double parameter(const std::string& key) const;
  double parameter(const std::string& key, double fallback) const;
};

MapBundle build_map(const FamilySpec& spec);
/// Fields for rotation, radial_twist, bump and tilted specs.
HamiltonianField build_field(const FamilySpec& spec);

}  // namespace calabi
