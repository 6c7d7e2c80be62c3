#pragma once

// Lifts of orientation-preserving circle maps, rotation numbers and
// invariant measures on the boundary circle. Circle positions are in turns.

#include <functional>
#include <optional>
#include <vector>

#include "calabi/flow.hpp"
#include "calabi/geometry.hpp"

namespace calabi {

/// A lift phi: R -> R with phi(x + 1) = phi(x) + 1. Only the restriction to
/// [0, 1) is stored; the integer part is reattached on evaluation, so the
/// commutation relation holds exactly.
class LiftedCircleMap {
 public:
  using UnitInterval = std::function<double(double)>;

  LiftedCircleMap() : shift_(0.0) {}
  explicit LiftedCircleMap(UnitInterval on_unit_interval) : f_(std::move(on_unit_interval)) {}

  static LiftedCircleMap translation(double shift);

  double operator()(double x) const;
  double displacement(double x) const { return (*this)(x) - x; }

  /// this o first
  LiftedCircleMap after(const LiftedCircleMap& first) const;
  LiftedCircleMap power(int n) const;

  /// Set when the lift is a rigid translation.
  std::optional<double> shift() const { return shift_; }

 private:
  UnitInterval f_;
  std::optional<double> shift_;
};

struct RotationNumberEstimate {
  Turns value;
  double rigorous_halfwidth = 0.0;
  int iterates_used = 0;
};

struct BoundaryMeasure {
  std::vector<double> points;   // in [0, 1)
  std::vector<double> weights;  // sum to 1
  bool periodic = false;
  int period = 0;
};

/// Continuous argument tracking of t -> f_t(e^{2 pi i x}) along the isotopy.
LiftedCircleMap lift_from_isotopy(const DiskIsotopy& isotopy);
inline LiftedCircleMap boundary_lift(const MapBundle& bundle) {
  return lift_from_isotopy(bundle.isotopy());
}

/// (phi^n(x0) - x0) / n; the true rotation number lies within 1/n.
RotationNumberEstimate rotation_number(const LiftedCircleMap& lift, int n = 100000,
                                       double x0 = 0.0);

struct MeasureControls {
  double period_tol = 1e-10;
  int max_period = 10000;
};

/// Empirical measure of the orbit segment phi^k(x0), burn_in <= k < burn_in + samples,
/// or the exact periodic-orbit measure when the orbit closes up.
BoundaryMeasure invariant_measure(const LiftedCircleMap& lift, int burn_in, int samples,
                                  double x0 = 0.0, const MeasureControls& controls = {});

/// sum_i w_i delta(x_i), the Birkhoff form of the rotation number.
double birkhoff_displacement(const LiftedCircleMap& lift, const BoundaryMeasure& measure);

/// max over psi in {cos 2 pi x, sin 2 pi x} of |int psi d(phi_* mu) - int psi d mu|.
double invariance_defect(const LiftedCircleMap& lift, const BoundaryMeasure& measure);

}  // namespace calabi
