#include <doctest.h>

#include <complex>
#include <random>

#include "calabi/circle.hpp"
#include "calabi/mapzoo.hpp"

using namespace calabi;

namespace {

// x + a + b sin(2 pi (x + c)), increasing for |b| < 1/(2 pi).
LiftedCircleMap wave(double a, double b, double c = 0.0) {
  return LiftedCircleMap([=](double x) { return x + a + b * std::sin(kTwoPi * (x + c)); });
}

}  // namespace

TEST_CASE("rotation numbers of simple lifts") {
  CHECK(rotation_number(LiftedCircleMap::translation(0.0), 1000).value.value == 0.0);
  CHECK(rotation_number(LiftedCircleMap::translation(1.0), 1000).value.value ==
        doctest::Approx(1.0));
  const auto est = rotation_number(LiftedCircleMap::translation(0.3), 1000);
  CHECK(est.value.value == doctest::Approx(0.3));
  CHECK(est.rigorous_halfwidth <= 1e-3 + 1e-15);
}

TEST_CASE("rotation number of a perturbed rotation against a long direct orbit") {
  const auto phi = wave(0.05, 0.02);
  const auto est = rotation_number(phi, 10000);
  double x = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) x = x + 0.05 + 0.02 * std::sin(kTwoPi * x);
  CHECK(std::abs(est.value.value - x / n) <= 1.0 / 10000 + 1.0 / n);
}

TEST_CASE("periodic orbit measure of the 1/3 rotation") {
  const auto mu = invariant_measure(LiftedCircleMap::translation(1.0 / 3.0), 0, 1000);
  CHECK(mu.periodic);
  CHECK(mu.period == 3);
  REQUIRE(mu.points.size() == 3);
  for (double w : mu.weights) CHECK(w == doctest::Approx(1.0 / 3.0));
  CHECK(birkhoff_displacement(LiftedCircleMap::translation(1.0 / 3.0), mu) ==
        doctest::Approx(1.0 / 3.0));
}

TEST_CASE("golden rotation orbit equidistributes") {
  const double alpha = (std::sqrt(5.0) - 1.0) / 2.0;
  const int n = 5000;
  const auto mu = invariant_measure(LiftedCircleMap::translation(alpha), 0, n);
  CHECK_FALSE(mu.periodic);
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < mu.points.size(); ++i)
    sum += mu.weights[i] * std::polar(1.0, kTwoPi * mu.points[i]);
  // Geometric-sum bound for Weyl sums of an irrational rotation.
  CHECK(std::abs(sum) <= 1.0 / (n * std::sin(kPi * alpha)) + 1e-12);
  CHECK(invariance_defect(LiftedCircleMap::translation(alpha), mu) <= 2.0 / n + 1e-12);
}

TEST_CASE("lift with an attracting fixed point has rotation number zero") {
  const auto phi = wave(0.0, 0.1);
  CHECK(std::abs(rotation_number(phi, 1000, 0.3).value.value) <= 1e-3);
  const auto mu = invariant_measure(phi, 1000, 100, 0.3);
  CHECK(std::abs(birkhoff_displacement(phi, mu)) < 1e-9);
}

TEST_CASE("commutation with integer translation") {
  const auto phi = wave(0.2, 0.1, 0.3);
  for (int k = 0; k < 64; ++k) {
    const double x = k / 64.0;
    CHECK(phi(x + 1.0) == phi(x) + 1.0);
    CHECK(phi(x - 2.0) == phi(x) - 2.0);
  }
  const auto lift = boundary_lift(conjugated_rotation(Turns(0.2), tilted_field(0.3, 1.0), 0.5));
  for (int k = 0; k < 8; ++k) CHECK(lift(k / 8.0 + 1.0) == lift(k / 8.0) + 1.0);
}

TEST_CASE("property: rotation number is a homogeneous quasi-morphism") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> a(-1.0, 1.0), b(-0.15, 0.15), c(0.0, 1.0);
  const int n = 1000;
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = wave(a(rng), b(rng), c(rng));
    const auto g = wave(a(rng), b(rng), c(rng));
    const double rf = rotation_number(f, n).value.value;
    const double rg = rotation_number(g, n).value.value;
    const double rfg = rotation_number(f.after(g), n).value.value;
    CHECK(std::abs(rfg - rf - rg) <= 1.0 + 3.0 / n);
    // Homogeneity: rho(f^3) = 3 rho(f), up to the estimator error.
    CHECK(std::abs(rotation_number(f.power(3), n).value.value - 3.0 * rf) <= 3.0 / n + 3.0 / n);
    // Integer equivariance.
    const auto shifted = LiftedCircleMap::translation(1.0).after(f);
    CHECK(rotation_number(shifted, n).value.value == doctest::Approx(rf + 1.0).epsilon(1e-12));
    // Independence of the base point.
    CHECK(std::abs(rotation_number(f, n, c(rng)).value.value - rf) <= 2.0 / n);
  }
}

TEST_CASE("Birkhoff average agrees with the orbit estimate") {
  const auto phi = wave(0.31, 0.05);
  const auto est = rotation_number(phi, 20000);
  const auto mu = invariant_measure(phi, 1000, 10000);
  CHECK(std::abs(birkhoff_displacement(phi, mu) - est.value.value) <= 1.0 / 10000 + 1.0 / 20000);
}

TEST_CASE("boundary lift of isotopies") {
  CHECK(boundary_lift(rotation(Turns(0.3)))(0.1) == doctest::Approx(0.4));
  CHECK(boundary_lift(identity_map())(0.1) == doctest::Approx(0.1));
  // g = 0.3 (1 - s)^2 has g'(1) = 0: the boundary is fixed pointwise.
  CHECK(boundary_lift(radial_twist({{0.3, -0.6, 0.3}}))(0.7) == doctest::Approx(0.7));
  // A full turn is not forgotten.
  CHECK(boundary_lift(rotation(Turns(1.25)))(0.0) == doctest::Approx(1.25));
}
