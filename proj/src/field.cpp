#include "calabi/field.hpp"

#include <algorithm>
#include <cmath>

namespace calabi {

double evaluate(const HamiltonianField& field, double t, const Point& z) {
  return field.value(t, z);
}

Eigen::Vector2d gradient(const HamiltonianField& field, double t, const Point& z) {
  if (field.gradient) return field.gradient(t, z);
  const double h = finite_difference_step(z);
  const Point du(h, 0.0), dv(0.0, h);
  return Eigen::Vector2d((field.value(t, z + du) - field.value(t, z - du)) / (2 * h),
                         (field.value(t, z + dv) - field.value(t, z - dv)) / (2 * h));
}

Eigen::Matrix2d hessian(const HamiltonianField& field, double t, const Point& z) {
  if (field.hessian) return field.hessian(t, z);
  const double h = finite_difference_step(z);
  const Point du(h, 0.0), dv(0.0, h);
  Eigen::Matrix2d m;
  m.col(0) = (gradient(field, t, z + du) - gradient(field, t, z - du)) / (2 * h);
  m.col(1) = (gradient(field, t, z + dv) - gradient(field, t, z - dv)) / (2 * h);
  // symmetrize
  const double off = 0.5 * (m(0, 1) + m(1, 0));
  m(0, 1) = m(1, 0) = off;
  return m;
}

Tangent hamiltonian_vector_field(const HamiltonianField& field, double t, const Point& z) {
  const Eigen::Vector2d g = gradient(field, t, z);
  return kPi * Tangent(g(1), -g(0));
}

Eigen::Matrix2d vector_field_jacobian(const HamiltonianField& field, double t,
                                      const Point& z) {
  const Eigen::Matrix2d h = hessian(field, t, z);
  Eigen::Matrix2d j;
  j << h(1, 0), h(1, 1),
      -h(0, 0), -h(0, 1);
  return kPi * j;
}

double boundary_variation(const HamiltonianField& field, double t, int samples) {
  double lo = 0.0, hi = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double h = field.value(t, circle_point(static_cast<double>(k) / samples));
    if (k == 0 || h < lo) lo = h;
    if (k == 0 || h > hi) hi = h;
  }
  return hi - lo;
}

HamiltonianField radial_field(std::string name,
                              std::vector<std::pair<std::string, double>> parameters,
                              RadialProfile profile) {
  HamiltonianField f;
  f.name = std::move(name);
  f.parameters = std::move(parameters);
  f.autonomous = true;
  f.value = [g = profile.value](double, const Point& z) { return g(z.squaredNorm()); };
  f.gradient = [dg = profile.slope](double, const Point& z) -> Eigen::Vector2d {
    return 2.0 * dg(z.squaredNorm()) * z;
  };
  f.hessian = [dg = profile.slope, d2g = profile.curvature](double, const Point& z) {
    const double s = z.squaredNorm();
    Eigen::Matrix2d m = 2.0 * dg(s) * Eigen::Matrix2d::Identity();
    m += 4.0 * d2g(s) * z * z.transpose();
    return m;
  };
  f.radial = std::move(profile);
  return f;
}

HamiltonianField scaled(const HamiltonianField& field, double factor) {
  HamiltonianField f = field;
  f.parameters.emplace_back("scale", factor);
  f.value = [v = field.value, factor](double t, const Point& z) { return factor * v(t, z); };
  if (field.gradient)
    f.gradient = [g = field.gradient, factor](double t, const Point& z) -> Eigen::Vector2d {
      return factor * g(t, z);
    };
  if (field.hessian)
    f.hessian = [h = field.hessian, factor](double t, const Point& z) -> Eigen::Matrix2d {
      return factor * h(t, z);
    };
  if (field.radial) {
    const RadialProfile p = *field.radial;
    f.radial = RadialProfile{
        [g = p.value, factor](double s) { return factor * g(s); },
        [g = p.slope, factor](double s) { return factor * g(s); },
        [g = p.curvature, factor](double s) { return factor * g(s); },
        p.integral ? std::optional<double>(factor * *p.integral) : std::nullopt};
  }
  return f;
}

}  // namespace calabi
