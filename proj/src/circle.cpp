#include "calabi/circle.hpp"

#include <cmath>
#include <memory>

namespace calabi {

LiftedCircleMap LiftedCircleMap::translation(double shift) {
  LiftedCircleMap m([shift](double x) { return x + shift; });
  m.shift_ = shift;
  return m;
}

double LiftedCircleMap::operator()(double x) const {
  if (shift_) return x + *shift_;
  const double base = std::floor(x);
  return base + f_(x - base);
}

LiftedCircleMap LiftedCircleMap::after(const LiftedCircleMap& first) const {
  if (shift_ && first.shift_) return translation(*shift_ + *first.shift_);
  return LiftedCircleMap([outer = *this, inner = first](double x) { return outer(inner(x)); });
}

LiftedCircleMap LiftedCircleMap::power(int n) const {
  if (shift_) return translation(n * *shift_);
  LiftedCircleMap out = translation(0.0);
  for (int k = 0; k < n; ++k) out = after(out);
  return out;
}

LiftedCircleMap lift_from_isotopy(const DiskIsotopy& isotopy) {
  LiftedCircleMap lift = LiftedCircleMap::translation(0.0);
  for (const Piece& p : isotopy.pieces()) {
    if (p.exact()) {
      lift = LiftedCircleMap::translation(p.boundary_lift(0.0)).after(lift);
    } else {
      auto piece = std::make_shared<Piece>(p);
      lift = LiftedCircleMap([piece](double x) { return piece->boundary_lift(x); }).after(lift);
    }
  }
  return lift;
}

RotationNumberEstimate rotation_number(const LiftedCircleMap& lift, int n, double x0) {
  double x = x0;
  for (int k = 0; k < n; ++k) x = lift(x);
  return {Turns((x - x0) / n), 1.0 / n, n};
}

BoundaryMeasure invariant_measure(const LiftedCircleMap& lift, int burn_in, int samples,
                                  double x0, const MeasureControls& controls) {
  double x = x0;
  for (int k = 0; k < burn_in; ++k) x = lift(x);
  const double start = x;
  std::vector<double> orbit;
  orbit.reserve(samples);
  BoundaryMeasure mu;
  for (int q = 1; q <= samples; ++q) {
    orbit.push_back(x - std::floor(x));
    x = lift(x);
    const double d = x - start;
    if (q <= controls.max_period && std::abs(d - std::round(d)) <= controls.period_tol) {
      mu.periodic = true;
      mu.period = q;
      break;
    }
  }
  mu.points = std::move(orbit);
  mu.weights.assign(mu.points.size(), 1.0 / static_cast<double>(mu.points.size()));
  return mu;
}

double birkhoff_displacement(const LiftedCircleMap& lift, const BoundaryMeasure& measure) {
  double sum = 0.0;
  for (std::size_t i = 0; i < measure.points.size(); ++i)
    sum += measure.weights[i] * lift.displacement(measure.points[i]);
  return sum;
}

double invariance_defect(const LiftedCircleMap& lift, const BoundaryMeasure& measure) {
  double dc = 0.0, ds = 0.0;
  for (std::size_t i = 0; i < measure.points.size(); ++i) {
    const double x = measure.points[i], y = lift(x);
    dc += measure.weights[i] * (std::cos(kTwoPi * y) - std::cos(kTwoPi * x));
    ds += measure.weights[i] * (std::sin(kTwoPi * y) - std::sin(kTwoPi * x));
  }
  return std::max(std::abs(dc), std::abs(ds));
}

}  // namespace calabi
