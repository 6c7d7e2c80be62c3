#include "calabi/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>

#include "calabi/errors.hpp"

namespace calabi {
namespace {

Eigen::Matrix2d rotation_matrix(double radians) {
  const double c = std::cos(radians), s = std::sin(radians);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

const Eigen::Matrix2d& quarter_turn() {
  static const Eigen::Matrix2d j = (Eigen::Matrix2d() << 0.0, -1.0, 1.0, 0.0).finished();
  return j;
}

void keep_in_disk(Point& z) {
  if (!project_to_disk(z))
    throw OutsideDisk("flow left the closed disk at radius " + std::to_string(z.norm()));
}

std::vector<Point> calibration_probes() {
  std::vector<Point> probes{Point::Zero()};
  for (double r : {0.3, 0.6, 0.9, 1.0})
    for (int k = 0; k < 8; ++k) probes.push_back(r * circle_point((k + 0.25) / 8.0));
  return probes;
}

}  // namespace

Piece::Piece(std::shared_ptr<const HamiltonianField> field, double duration, bool reversed,
             const FlowControls& controls)
    : field_(std::move(field)), duration_(duration), reversed_(reversed) {
  if (field_->autonomous && field_->radial) {
    steps_ = 0;
    return;
  }
  static const std::vector<Point> probes = calibration_probes();
  for (int n = std::max(1, controls.initial_steps); n <= controls.max_steps; n *= 2) {
    double diff = 0.0;
    try {
      for (const Point& p : probes)
        diff = std::max(diff, (rk4(p, 0.0, 1.0, n) - rk4(p, 0.0, 1.0, 2 * n)).norm());
    } catch (const OutsideDisk&) {
      continue;
    }
    if (diff <= controls.tol_ode) {
      steps_ = n;
      return;
    }
  }
  throw StepTooCoarse("no step count up to " + std::to_string(controls.max_steps) +
                      " resolves the flow of " + field_->name);
}

Piece Piece::inverted() const { return Piece(field_, duration_, !reversed_, steps_); }

int Piece::steps_for(double s0, double s1, int per_unit) const {
  return std::max(1, static_cast<int>(std::ceil(per_unit * std::abs(s1 - s0) - 1e-9)));
}

namespace {

double wrapped(const HamiltonianField& f, double t) {
  if (f.autonomous || t <= 1.0) return t;
  return t - std::floor(t);
}

}  // namespace

Tangent Piece::velocity(double s, const Point& z) const {
  return rate() * hamiltonian_vector_field(*field_, wrapped(*field_, field_time(s)), z);
}

double Piece::generator(double s, const Point& z) const {
  return rate() * evaluate(*field_, wrapped(*field_, field_time(s)), z);
}

Point Piece::rk4(const Point& z0, double s0, double s1, int n) const {
  const double h = (s1 - s0) / n;
  Point z = z0;
  for (int k = 0; k < n; ++k) {
    const double s = s0 + k * h;
    const Tangent k1 = velocity(s, z);
    const Tangent k2 = velocity(s + 0.5 * h, z + 0.5 * h * k1);
    const Tangent k3 = velocity(s + 0.5 * h, z + 0.5 * h * k2);
    const Tangent k4 = velocity(s + h, z + h * k3);
    z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    keep_in_disk(z);
  }
  return z;
}

std::pair<Point, Jacobian> Piece::rk4_with_jacobian(const Point& z0, double s0, double s1,
                                                    int n) const {
  const double h = (s1 - s0) / n;
  const double c = rate();
  auto dj = [&](double s, const Point& z, const Jacobian& j) -> Jacobian {
    return c * vector_field_jacobian(*field_, wrapped(*field_, field_time(s)), z) * j;
  };
  Point z = z0;
  Jacobian j = Jacobian::Identity();
  for (int k = 0; k < n; ++k) {
    const double s = s0 + k * h;
    const Tangent k1 = velocity(s, z);
    const Jacobian l1 = dj(s, z, j);
    const Point z2 = z + 0.5 * h * k1;
    const Jacobian j2 = j + 0.5 * h * l1;
    const Tangent k2 = velocity(s + 0.5 * h, z2);
    const Jacobian l2 = dj(s + 0.5 * h, z2, j2);
    const Point z3 = z + 0.5 * h * k2;
    const Jacobian j3 = j + 0.5 * h * l2;
    const Tangent k3 = velocity(s + 0.5 * h, z3);
    const Jacobian l3 = dj(s + 0.5 * h, z3, j3);
    const Point z4 = z + h * k3;
    const Jacobian j4 = j + h * l3;
    const Tangent k4 = velocity(s + h, z4);
    const Jacobian l4 = dj(s + h, z4, j4);
    z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    j += (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
    keep_in_disk(z);
  }
  return {z, j};
}

std::pair<Point, Jacobian> Piece::exact_with_jacobian(const Point& z, double s0,
                                                      double s1) const {
  const RadialProfile& g = *field_->radial;
  const double s = z.squaredNorm();
  const double elapsed = rate() * (s1 - s0);
  const double phi = -kTwoPi * g.slope(s) * elapsed;
  const Eigen::Matrix2d r = rotation_matrix(phi);
  const Point out = r * z;
  const Eigen::Vector2d grad_phi = -kTwoPi * g.curvature(s) * elapsed * 2.0 * z;
  const Jacobian j = r + (quarter_turn() * out) * grad_phi.transpose();
  return {out, j};
}

Point Piece::advance(const Point& z, double s0, double s1) const {
  if (exact()) {
    const double s = z.squaredNorm();
    const double phi = -kTwoPi * field_->radial->slope(s) * rate() * (s1 - s0);
    return rotation_matrix(phi) * z;
  }
  return rk4(z, s0, s1, steps_for(s0, s1, steps_));
}

std::pair<Point, Jacobian> Piece::advance_with_jacobian(const Point& z, double s0,
                                                        double s1) const {
  if (exact()) return exact_with_jacobian(z, s0, s1);
  if (!field_->gradient) {
    // Non-differentiable generators: differentiate the flow itself.
    const double h = finite_difference_step(z);
    Jacobian j;
    for (int c = 0; c < 2; ++c) {
      Point e = Point::Zero();
      e(c) = h;
      j.col(c) = (advance(z + e, s0, s1) - advance(z - e, s0, s1)) / (2 * h);
    }
    return {advance(z, s0, s1), j};
  }
  return rk4_with_jacobian(z, s0, s1, steps_for(s0, s1, steps_));
}

std::vector<Point> Piece::trajectory(const Point& z0, int samples) const {
  std::vector<Point> out;
  out.reserve(samples + 1);
  out.push_back(z0);
  if (exact()) {
    const double s = z0.squaredNorm();
    const double turns = -field_->radial->slope(s) * rate();
    for (int j = 1; j <= samples; ++j)
      out.push_back(rotation_matrix(kTwoPi * turns * j / samples) * z0);
    return out;
  }
  const int per_sample = std::max(1, (steps_ + samples - 1) / samples);
  const int n = per_sample * samples;
  const double h = 1.0 / n;
  Point z = z0;
  for (int k = 0; k < n; ++k) {
    const double s = k * h;
    const Tangent k1 = velocity(s, z);
    const Tangent k2 = velocity(s + 0.5 * h, z + 0.5 * h * k1);
    const Tangent k3 = velocity(s + 0.5 * h, z + 0.5 * h * k2);
    const Tangent k4 = velocity(s + h, z + h * k3);
    z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    keep_in_disk(z);
    if ((k + 1) % per_sample == 0) out.push_back(z);
  }
  return out;
}

double Piece::boundary_lift(double x) const {
  const double base = std::floor(x);
  const double frac = x - base;
  if (exact()) return base + frac - field_->radial->slope(1.0) * rate();
  const std::vector<Point> path = trajectory(circle_point(frac), steps_);
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const double gap = turn_gap(path[i - 1], path[i]);
    if (std::abs(gap) >= 0.25)
      throw StepTooCoarse("boundary rotates a quarter turn or more within one step");
    total += gap;
  }
  return base + frac + total;
}

std::pair<std::size_t, double> DiskIsotopy::locate(double t) const {
  const double k_total = static_cast<double>(pieces_.size());
  const double scaled = std::clamp(t, 0.0, 1.0) * k_total;
  const std::size_t k = std::min(pieces_.size() - 1, static_cast<std::size_t>(scaled));
  return {k, scaled - static_cast<double>(k)};
}

Point DiskIsotopy::map(const Point& z) const {
  Point w = z;
  for (const Piece& p : pieces_) w = p.advance(w);
  return w;
}

std::pair<Point, Jacobian> DiskIsotopy::map_with_jacobian(const Point& z) const {
  Point w = z;
  Jacobian j = Jacobian::Identity();
  for (const Piece& p : pieces_) {
    const auto [next, dj] = p.advance_with_jacobian(w);
    w = next;
    j = dj * j;
  }
  return {w, j};
}

Point DiskIsotopy::flow(double t, const Point& z) const {
  if (pieces_.empty()) return z;
  const auto [k, s] = locate(t);
  Point w = z;
  for (std::size_t i = 0; i < k; ++i) w = pieces_[i].advance(w);
  return pieces_[k].advance(w, 0.0, s);
}

std::pair<Point, Jacobian> DiskIsotopy::flow_with_jacobian(double t, const Point& z) const {
  if (pieces_.empty()) return {z, Jacobian::Identity()};
  const auto [k, s] = locate(t);
  Point w = z;
  Jacobian j = Jacobian::Identity();
  for (std::size_t i = 0; i <= k; ++i) {
    const auto [next, dj] =
        i < k ? pieces_[i].advance_with_jacobian(w) : pieces_[i].advance_with_jacobian(w, 0.0, s);
    w = next;
    j = dj * j;
  }
  return {w, j};
}

double DiskIsotopy::hamiltonian(double t, const Point& z) const {
  if (pieces_.empty()) return 0.0;
  const auto [k, s] = locate(t);
  return static_cast<double>(pieces_.size()) * pieces_[k].generator(s, z);
}

DiskIsotopy DiskIsotopy::inverse() const {
  std::vector<Piece> out;
  out.reserve(pieces_.size());
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) out.push_back(it->inverted());
  return DiskIsotopy(std::move(out));
}

DiskIsotopy DiskIsotopy::then(const DiskIsotopy& next) const {
  std::vector<Piece> out = pieces_;
  out.insert(out.end(), next.pieces_.begin(), next.pieces_.end());
  return DiskIsotopy(std::move(out));
}

Point flow_map(const MapBundle& bundle, double t, const Point& z) {
  return bundle.isotopy().flow(t, z);
}

Jacobian flow_jacobian(const MapBundle& bundle, double t, const Point& z) {
  return bundle.isotopy().flow_with_jacobian(t, z).second;
}

Jacobian flow_jacobian_fd(const MapBundle& bundle, double t, const Point& z) {
  const double h = finite_difference_step(z);
  Jacobian j;
  for (int c = 0; c < 2; ++c) {
    Point e = Point::Zero();
    e(c) = h;
    j.col(c) = (flow_map(bundle, t, z + e) - flow_map(bundle, t, z - e)) / (2 * h);
  }
  return j;
}

double area_residual(const MapBundle& bundle, int sample_count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < sample_count; ++i) {
    const Point z = sample_disk(rng);
    worst = std::max(worst, std::abs(bundle.isotopy().map_with_jacobian(z).second.determinant() - 1.0));
  }
  return worst;
}

}  // namespace calabi
