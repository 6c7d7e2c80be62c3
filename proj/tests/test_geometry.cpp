#include <doctest.h>

#include <vector>

#include "calabi/errors.hpp"
#include "calabi/geometry.hpp"
#include "calabi/quadrature.hpp"

using namespace calabi;

TEST_CASE("turn_gap measures signed angles in turns") {
  CHECK(turn_gap(Point(1, 0), Point(0, 1)) == doctest::Approx(0.25));
  CHECK(turn_gap(Point(0, 1), Point(1, 0)) == doctest::Approx(-0.25));
  CHECK(turn_gap(Point(1, 0), Point(-1, 0)) == doctest::Approx(0.5));
  // Expression arguments.
  const Point a(1, 1), b(1, -1);
  CHECK(turn_gap(a + b, a - b) == doctest::Approx(0.25));
  CHECK(turn_gap(Point(2, 0), Point(std::cos(0.3), std::sin(0.3))) ==
        doctest::Approx(0.3 / (2 * 3.141592653589793)));
}

TEST_CASE("unwrap_angle follows a curve winding three times") {
  std::vector<Tangent> path;
  for (int k = 0; k <= 100; ++k) path.push_back(0.5 * circle_point(3.0 * k / 100.0));
  CHECK(unwrap_angle(path).value == doctest::Approx(3.0).epsilon(1e-12));

  std::vector<Tangent> back(path.rbegin(), path.rend());
  CHECK(unwrap_angle(back).value == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("unwrap_angle rejects zero vectors and coarse steps") {
  std::vector<Tangent> zero{Tangent(1, 0), Tangent(0, 0)};
  CHECK_THROWS_AS(unwrap_angle(zero), ZeroVector);
  std::vector<Tangent> coarse{Tangent(1, 0), Tangent(0, 1)};
  CHECK_THROWS_AS(unwrap_angle(coarse), StepTooCoarse);
  std::vector<Tangent> fine{Tangent(1, 0), circle_point(0.2499)};
  CHECK(unwrap_angle(fine).value == doctest::Approx(0.2499));
}

TEST_CASE("Liouville form integrates to the area of the disk") {
  // int_{S^1} lambda = int_D omega = 1.
  const int m = 1000;
  double sum = 0.0;
  for (int k = 0; k < m; ++k) {
    const double x = (k + 0.5) / m;
    const Point z = circle_point(x);
    const Tangent w = (2 * 3.141592653589793 / m) * Tangent(-z(1), z(0));
    sum += liouville_eval(z, w);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(area_density(Point(0.1, 0.2)) == doctest::Approx(1.0 / 3.141592653589793));
}

TEST_CASE("project_to_disk tolerates only tiny excursions") {
  Point z(1.0 + 1e-12, 0.0);
  CHECK(project_to_disk(z));
  CHECK(z.norm() == doctest::Approx(1.0).epsilon(1e-15));
  Point far(1.1, 0.0);
  CHECK_FALSE(project_to_disk(far));
  Point inside(0.3, 0.4);
  CHECK(project_to_disk(inside));
  CHECK(inside == Point(0.3, 0.4));
}

TEST_CASE("Turns arithmetic") {
  const Turns a(0.25), b(0.5);
  CHECK((a + b).value == doctest::Approx(0.75));
  CHECK((b - a).value == doctest::Approx(0.25));
  CHECK((2.0 * a).value == doctest::Approx(0.5));
  CHECK(a < b);
  CHECK(a.radians() == doctest::Approx(3.141592653589793 / 2));
}

TEST_CASE("Gauss-Legendre rules") {
  const QuadratureRule r3 = gauss_legendre(3, -1.0, 1.0);
  REQUIRE(r3.nodes.size() == 3);
  CHECK(r3.nodes[0] == doctest::Approx(-std::sqrt(0.6)));
  CHECK(r3.nodes[1] == doctest::Approx(0.0));
  CHECK(r3.weights[0] == doctest::Approx(5.0 / 9.0));
  CHECK(r3.weights[1] == doctest::Approx(8.0 / 9.0));

  // Exact for degree 2n - 1 on [0, 2]: int x^15 = 2^16 / 16.
  const QuadratureRule r8 = gauss_legendre(8, 0.0, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < r8.nodes.size(); ++i) s += r8.weights[i] * std::pow(r8.nodes[i], 15);
  CHECK(s == doctest::Approx(65536.0 / 16.0).epsilon(1e-13));

  const QuadratureRule c = composite_gauss_legendre(10, 4, 0.0, 1.0);
  CHECK(c.nodes.size() == 40);
  double e = 0.0;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) e += c.weights[i] * std::exp(c.nodes[i]);
  CHECK(e == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}
