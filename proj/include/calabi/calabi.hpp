#pragma once

// The three Calabi computations on the disk:
//
//   Cal1   mean of the action function,      int_D A_f omega
//   Cal2~  mean of the angle function,       int int Ang_f(x, y) omega(x) omega(y)
//   Cal3~  Hamiltonian time integral,        2 int_0^1 int_D H_t omega dt   (H_t = 0 on S^1)
//
// linked by Cal2~ = Cal3~ = Cal1 + rho~ where rho~ is the rotation number of
// the boundary lift.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "calabi/circle.hpp"
#include "calabi/flow.hpp"
#include "calabi/geometry.hpp"
#include "calabi/quadrature.hpp"

namespace calabi {

/// lambda + du for an optional exact perturbation du (lambda = r^2/(2 pi) dtheta).
struct LiouvilleForm {
  std::function<Eigen::Vector2d(const Point&)> exact_gradient;

  double operator()(const Point& z, const Tangent& w) const {
    double v = liouville_eval(z, w);
    if (exact_gradient) v += exact_gradient(z).dot(w);
    return v;
  }
};

/// (f* lambda - lambda)_z(w).
double pullback_difference(const MapBundle& bundle, const LiouvilleForm& lambda,
                           const Point& z, const Tangent& w);

struct ActionOptions {
  /// Gauss-Legendre nodes per unit radius, split over radial_panels panels
  /// with edges at the radii k / radial_panels.
  int radial_nodes = 64;
  int radial_panels = 8;
  LiouvilleForm lambda;
  double tol_area = 1e-6;
  int area_samples = 64;
  std::uint64_t area_seed = 1;
  /// Measures with more atoms use trigonometric interpolation of A0 on S^1.
  std::size_t direct_limit = 512;
  int boundary_samples = 256;
};

/// A = A0 - c_mu where A0(z) integrates f*lambda - lambda along a path from 0
/// to z and c_mu = int_{S^1} A0 dmu. For f = P_K o ... o P_1 (the pieces of the
/// isotopy) A0 is assembled piece by piece,
///   A0(z) = sum_k A0_{P_k}(z_{k-1}) - A0_{P_k}(w_{k-1}),
/// with z_k, w_k the partial images of z and 0 and A0_P the integral along the
/// segment [0, z]. Each term only sees one flow, so its integrand stays smooth
/// when a fast radial piece is followed by a non-radial one.
class ActionFunction {
 public:
  ActionFunction(MapBundle bundle, const BoundaryMeasure& mu, const ActionOptions& options);
  double base(const Point& z) const;
  double operator()(const Point& z) const { return base(z) - normalization_; }
  double normalization() const { return normalization_; }
  double area_residual() const { return area_residual_; }
  const MapBundle& bundle() const { return bundle_; }
  const LiouvilleForm& lambda() const { return lambda_; }
  /// One single-piece bundle per piece of the isotopy.
  const std::vector<MapBundle>& pieces() const { return pieces_; }
  /// A0_{P_k}(w_{k-1}).
  const std::vector<double>& offsets() const { return offsets_; }
  /// Integral of P*lambda - lambda along the segment [0, z].
  double segment(const MapBundle& piece, const Point& z) const;

 private:
  MapBundle bundle_;
  LiouvilleForm lambda_;
  QuadratureRule radial_;  // per panel, on [0, 1]
  int panels_ = 1;
  std::vector<MapBundle> pieces_;
  std::vector<double> offsets_;
  double normalization_ = 0.0;
  double area_residual_ = 0.0;
};

/// Throws NotAreaPreserving when area_residual exceeds 10 tol_area.
ActionFunction action_function(const MapBundle& bundle, const BoundaryMeasure& mu,
                               const ActionOptions& options = {});

struct QuadratureResult {
  double value = 0.0;
  /// |value(grid) - value(refined grid)|, when computed.
  std::optional<double> richardson_delta;
};

struct Cal1Options {
  PolarGrid grid;
  ActionOptions action;
  bool richardson = true;
  int workers = 1;
};

struct Cal1Result : QuadratureResult {
  double normalization = 0.0;
  double area_residual = 0.0;
};

Cal1Result cal1(const MapBundle& bundle, const BoundaryMeasure& mu,
                const Cal1Options& options = {});

struct AngleControls {
  int base_samples = 256;
  int max_doublings = 8;
};

/// Winding in turns of t -> f_t(x) - f_t(y); each piece is sampled finely
/// enough that consecutive chords differ by less than a quarter turn.
Turns angle_function(const DiskIsotopy& isotopy, const Point& x, const Point& y,
                     const AngleControls& controls = {});
inline Turns angle_function(const MapBundle& bundle, const Point& x, const Point& y,
                            const AngleControls& controls = {}) {
  return angle_function(bundle.isotopy(), x, y, controls);
}

enum class SamplingStrategy { Uniform, Stratified };

struct PairSampler {
  std::size_t count = 20000;
  std::uint64_t seed = 0;
  double min_separation = 1e-6;
  SamplingStrategy strategy = SamplingStrategy::Uniform;
  int radial_strata = 8;
  int angular_strata = 8;
};

struct Cal2Options {
  AngleControls angle;
  int workers = 1;
  int retries_per_chunk = 16;
};

struct MonteCarloEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
  std::size_t retries = 0;
};

MonteCarloEstimate cal2_tilde(const MapBundle& bundle, const PairSampler& sampler,
                              const Cal2Options& options = {});

struct Cal3Options {
  PolarGrid grid{32, 4, 64};
  int time_nodes = 8;
  double boundary_tol = 1e-8;
  int boundary_samples = 64;
  bool richardson = true;
};

/// Cal3~ of the isotopy generated by `field` over t in [0, 1].
QuadratureResult cal3_tilde(const HamiltonianField& field, const Cal3Options& options = {});
/// Cal3~ of the concatenated isotopy carried by the bundle.
QuadratureResult cal3_tilde(const MapBundle& bundle, const Cal3Options& options = {});

/// Probability measure on D given by weighted atoms.
struct DiskMeasure {
  std::vector<Point> points;
  std::vector<double> weights;
};

DiskMeasure lebesgue_sample(std::size_t count, std::uint64_t seed);
DiskMeasure push_forward(const MapBundle& bundle, const DiskMeasure& mu);

/// sum over distinct atoms of w_i w_j Ang(x_i, x_j).
double c_mu_tilde(const MapBundle& bundle, const DiskMeasure& mu,
                  const AngleControls& controls = {}, int workers = 1);

struct CMuEstimate {
  /// sum over distinct atoms of w_i w_j Ang(x_i, x_j) with w = 1/points.
  double value = 0.0;
  /// Standard error of the pair mean as an estimate of Cal2~.
  double standard_error = 0.0;
  /// Missing diagonal mass: value differs from the pair mean by a factor (n-1)/n.
  double diagonal_deficit = 0.0;
  std::size_t points = 0;
};

/// c_mu_tilde for an equal-weight uniform sample of the disk.
CMuEstimate c_mu_lebesgue(const MapBundle& bundle, std::size_t points, std::uint64_t seed,
                          const AngleControls& controls = {}, int workers = 1);

/// (1/n) sum_{k<n} Ang(f^k x, f^k y). Throws OrbitCollision if the orbits come
/// within 1e-9 of each other.
Turns birkhoff_angle(const MapBundle& bundle, const Point& x, const Point& y, int n,
                     const AngleControls& controls = {});

struct Budgets {
  PairSampler pairs;
  Cal1Options cal1;
  Cal3Options cal3;
  int rho_iterates = 100000;
  int measure_burn_in = 1000;
  int measure_samples = 10000;
  double quadrature_budget = 1e-4;
  int workers = 1;
};

struct CalabiReport {
  std::string map;
  std::optional<Cal1Result> cal1;
  std::optional<MonteCarloEstimate> cal2;
  std::optional<QuadratureResult> cal3;
  std::optional<RotationNumberEstimate> rho;
  std::optional<double> c_mu;
  std::optional<double> c_mu_budget;

  std::optional<double> residual_link() const;
  std::optional<double> residual_23() const;
  /// 3 stderr + quadrature budget.
  std::optional<double> link_budget() const;
  std::optional<bool> link_pass() const;
  std::optional<bool> equality_pass() const;

  double quadrature_budget = 1e-4;
  std::uint64_t seed = 0;
  std::size_t measure_atoms = 0;
  bool measure_periodic = false;
};

/// Computes Cal1, Cal2~, Cal3~ and rho~ and the residuals of Cal2~ = Cal1 + rho~
/// and Cal2~ = Cal3~.
CalabiReport verify_link(const MapBundle& bundle, const Budgets& budgets);

/// Default boundary measure used for Cal1 (Birkhoff orbit of the boundary lift).
BoundaryMeasure default_boundary_measure(const MapBundle& bundle, const Budgets& budgets);

}  // namespace calabi
