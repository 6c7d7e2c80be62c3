#pragma once

// Batch experiments: C^1 continuity, C^0 discontinuity and rigidity of
// iterates along continued-fraction denominators.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "calabi/calabi.hpp"
#include "calabi/field.hpp"
#include "calabi/flow.hpp"

namespace calabi {

struct DistanceOptions {
  /// lattice x lattice interior grid plus `boundary` points on S^1.
  int lattice = 256;
  int boundary = 512;
  int workers = 1;
};

/// Sampled supremum (a lower bound for the true one). refinement_delta is the
/// increase from the half-resolution subset to the full sample set.
struct DistanceEstimate {
  double value = 0.0;
  double refinement_delta = 0.0;
};

/// d0(f, id) = max(|f - id|, |f^-1 - id|).
DistanceEstimate c0_distance(const MapBundle& f, const DistanceOptions& options = {});
/// max(d0, |Df - I|, |Df^-1 - I|, |phi - id|, |phi^-1 - id|) with the operator
/// 2-norm on matrices and the boundary lift in turns.
DistanceEstimate c1_distance(const MapBundle& f, const DistanceOptions& options = {});

using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct ExperimentResult {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool pass = false;
  std::vector<std::string> notes;
};

struct C1Options {
  /// Twist generating the family tau * H.
  std::vector<double> twist = {0.3, -0.6, 0.3};
  std::size_t pairs = 20000;
  std::size_t cosine_pairs = 1000;
  std::uint64_t seed = 1;
  DistanceOptions distance;
  int workers = 1;
};

ExperimentResult exp_c1_continuity(const std::vector<double>& scales, const C1Options& options = {});

struct C0Options {
  /// Radial Gauss-Legendre panels per unit of n for the Cal3~ quadrature.
  int panels_per_n = 16;
  double cal_tolerance = 1e-3;
  double small_distance = 0.05;
  DistanceOptions distance;
  int workers = 1;
};

ExperimentResult exp_c0_discontinuity(const std::vector<int>& ns, const C0Options& options = {});

struct RigidityOptions {
  std::int64_t q_max = 200;
  std::size_t far_pairs = 1000;
  std::uint64_t seed = 1;
  /// Allowed |cal1(f)| and per-iterate drift of cal1(f^q).
  double cal1_tolerance = 1e-4;
  Budgets budgets;
  DistanceOptions distance;
  FlowControls flow;
  int workers = 1;
};

ExperimentResult exp_rigidity(double alpha, int depth, const HamiltonianField& conjugator,
                              double tau, const RigidityOptions& options = {});

}  // namespace calabi
