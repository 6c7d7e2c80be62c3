#pragma once

// Time-1 maps of Hamiltonian isotopies.
//
// An isotopy is stored as a concatenation of pieces. Piece k of K occupies the
// global time slot [k/K, (k+1)/K] and runs the flow of one field, either
// forwards for a flow time tau or backwards (the inverse of such a flow).
// Composition, iteration, inversion and conjugation all reduce to
// rearranging pieces, so every bundle carries an honest isotopy from the
// identity whose boundary restriction fixes the lift.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "calabi/field.hpp"
#include "calabi/geometry.hpp"

namespace calabi {

struct FlowControls {
  int initial_steps = 256;
  double tol_ode = 1e-8;
  int max_steps = 1 << 20;
};

class Piece {
 public:
  /// Calibrates the RK4 step count: starting from controls.initial_steps the
  /// count doubles until two successive resolutions agree within tol_ode on a
  /// fixed probe set. Radial autonomous fields use their exact flow instead.
  Piece(std::shared_ptr<const HamiltonianField> field, double duration, bool reversed = false,
        const FlowControls& controls = {});

  Piece inverted() const;

  const HamiltonianField& field() const { return *field_; }
  std::shared_ptr<const HamiltonianField> field_ptr() const { return field_; }
  double duration() const { return duration_; }
  bool reversed() const { return reversed_; }
  bool exact() const { return steps_ == 0; }
  /// RK4 steps per unit local time (0 for exact flows).
  int steps() const { return steps_; }

  /// Field time reached at local time s in [0, 1].
  double field_time(double s) const { return reversed_ ? duration_ * (1.0 - s) : duration_ * s; }

  /// Moves z from local time s0 to s1.
  Point advance(const Point& z, double s0 = 0.0, double s1 = 1.0) const;
  std::pair<Point, Jacobian> advance_with_jacobian(const Point& z, double s0 = 0.0,
                                                   double s1 = 1.0) const;

  /// samples + 1 states at local times j / samples. When samples does not exceed
  /// the calibrated step count the last state equals advance(z).
  std::vector<Point> trajectory(const Point& z, int samples) const;

  /// d/ds of the state at local time s.
  Tangent velocity(double s, const Point& z) const;

  /// Generator of the piece in local time: +-tau * H(field_time(s), z).
  double generator(double s, const Point& z) const;

  /// Lift of the boundary restriction, by continuous argument tracking.
  double boundary_lift(double x) const;

 private:
  Piece(std::shared_ptr<const HamiltonianField> field, double duration, bool reversed,
        int steps)
      : field_(std::move(field)), duration_(duration), reversed_(reversed), steps_(steps) {}

  double rate() const { return reversed_ ? -duration_ : duration_; }
  int steps_for(double s0, double s1, int per_unit) const;
  Point rk4(const Point& z, double s0, double s1, int n) const;
  std::pair<Point, Jacobian> rk4_with_jacobian(const Point& z, double s0, double s1,
                                               int n) const;
  std::pair<Point, Jacobian> exact_with_jacobian(const Point& z, double s0, double s1) const;

  std::shared_ptr<const HamiltonianField> field_;
  double duration_ = 1.0;
  bool reversed_ = false;
  int steps_ = 0;
};

class DiskIsotopy {
 public:
  DiskIsotopy() = default;
  explicit DiskIsotopy(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {}

  std::span<const Piece> pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }
  bool is_identity() const { return pieces_.empty(); }

  Point map(const Point& z) const;
  std::pair<Point, Jacobian> map_with_jacobian(const Point& z) const;
  Point flow(double t, const Point& z) const;
  std::pair<Point, Jacobian> flow_with_jacobian(double t, const Point& z) const;

  /// Generator of the concatenated isotopy at global time t.
  double hamiltonian(double t, const Point& z) const;

  /// The isotopy t -> f_{1-t} o f^{-1} from the identity to f^{-1}.
  DiskIsotopy inverse() const;
  /// This isotopy followed by `next` (time-1 map next o this).
  DiskIsotopy then(const DiskIsotopy& next) const;

 private:
  std::pair<std::size_t, double> locate(double t) const;

  std::vector<Piece> pieces_;
};

/// Reference values known in closed form for a family; empty when unknown.
struct ClosedForm {
  std::optional<double> cal_tilde;
  /// Set when the boundary lift is the translation x -> x + shift.
  std::optional<double> boundary_shift;
  std::function<double(const Point&)> action;
  std::function<double(double)> circle_winding;

  std::optional<double> cal1() const {
    if (cal_tilde && boundary_shift) return *cal_tilde - *boundary_shift;
    return std::nullopt;
  }
};

/// An area-preserving disk map together with an isotopy from the identity.
class MapBundle {
 public:
  MapBundle() = default;
  MapBundle(std::string name, DiskIsotopy isotopy, ClosedForm closed = {})
      : name_(std::move(name)), isotopy_(std::move(isotopy)), closed_(std::move(closed)) {}

  const std::string& name() const { return name_; }
  const DiskIsotopy& isotopy() const { return isotopy_; }
  const ClosedForm& closed_form() const { return closed_; }

  Point operator()(const Point& z) const { return isotopy_.map(z); }

 private:
  std::string name_ = "identity";
  DiskIsotopy isotopy_;
  ClosedForm closed_;
};

Point flow_map(const MapBundle& bundle, double t, const Point& z);
Jacobian flow_jacobian(const MapBundle& bundle, double t, const Point& z);
/// Central differences of flow_map with step 1e-5 (1 + |z|).
Jacobian flow_jacobian_fd(const MapBundle& bundle, double t, const Point& z);

/// max |det Df - 1| over `sample_count` uniform interior points.
double area_residual(const MapBundle& bundle, int sample_count, std::uint64_t seed);

/// Uniform point of D under omega.
template <typename Rng>
Point sample_disk(Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = std::sqrt(unit(rng));
  return r * circle_point(unit(rng));
}

}  // namespace calabi
