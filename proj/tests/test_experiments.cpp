#include <doctest.h>

#include <algorithm>

#include "calabi/errors.hpp"
#include "calabi/experiments.hpp"
#include "calabi/mapzoo.hpp"

using namespace calabi;

namespace {

std::size_t column(const ExperimentResult& r, const std::string& name) {
  const auto it = std::find(r.columns.begin(), r.columns.end(), name);
  REQUIRE(it != r.columns.end());
  return static_cast<std::size_t>(it - r.columns.begin());
}

double number(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return *d;
  if (auto i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  FAIL("not a number");
  return 0.0;
}

DistanceOptions small_lattice() {
  DistanceOptions d;
  d.lattice = 64;
  d.boundary = 128;
  return d;
}

}  // namespace

TEST_CASE("C0 and C1 distances of rigid rotations") {
  CHECK(c0_distance(identity_map()).value == 0.0);
  // |R z - z| = 2 |z| sin(pi alpha), largest on the boundary.
  const double alpha = 0.01;
  const MapBundle r = rotation(Turns(alpha));
  CHECK(c0_distance(r, small_lattice()).value == doctest::Approx(2 * std::sin(kPi * alpha)).epsilon(1e-12));
  // ||R - I|| is also 2 sin(pi alpha); the boundary lift moves by alpha turns.
  CHECK(c1_distance(r, small_lattice()).value == doctest::Approx(2 * std::sin(kPi * alpha)).epsilon(1e-12));
  const DistanceEstimate big = c0_distance(rotation(Turns(0.25)), small_lattice());
  CHECK(big.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(big.refinement_delta >= 0.0);
}

TEST_CASE("c0-discontinuity on small bumps") {
  C0Options o;
  o.distance = small_lattice();
  const ExperimentResult r = exp_c0_discontinuity({2, 4, 8, 16}, o);
  CHECK(r.pass);
  REQUIRE(r.rows.size() == 4);
  const std::size_t cal = column(r, "cal3"), d0 = column(r, "d0");
  double previous = 10.0;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const int n = 2 << i;
    CHECK(number(r.rows[i][cal]) == doctest::Approx(2.0 / kPi).epsilon(1e-9));
    const double d = number(r.rows[i][d0]);
    CHECK(d <= 2.0 / n);
    CHECK(d < previous);
    previous = d;
  }
  CHECK_THROWS_AS(exp_c0_discontinuity({1}, o), ConfigError);
}

TEST_CASE("c1-continuity on a small budget") {
  C1Options o;
  o.pairs = 2000;
  o.cosine_pairs = 200;
  o.distance = small_lattice();
  const ExperimentResult r = exp_c1_continuity({0.02, 0.01}, o);
  CHECK(r.pass);
  REQUIRE(r.rows.size() == 2);
  const std::size_t cal = column(r, "cal2"), closed = column(r, "cal_closed_form");
  const std::size_t se = column(r, "cal2_stderr");
  for (const auto& row : r.rows)
    CHECK(std::abs(number(row[cal]) - number(row[closed])) <= 3 * number(row[se]) + 1e-12);
  CHECK_THROWS_AS(exp_c1_continuity({0.5}, o), ScaleTooLarge);
}

TEST_CASE("rigidity of a plain rotation") {
  // Without conjugation f^q is the rotation by q alpha, so d0 = 2 sin(pi |q alpha - p|).
  RigidityOptions o;
  o.distance = small_lattice();
  o.far_pairs = 100;
  o.budgets.rho_iterates = 1000;
  o.budgets.measure_samples = 500;
  o.budgets.cal1.richardson = false;
  o.budgets.cal1.grid = {8, 8, 64};
  const double alpha = (std::sqrt(5.0) - 1.0) / 2.0;
  const ExperimentResult r = exp_rigidity(alpha, 12, tilted_field(0.3, 1.0), 0.0, o);
  CHECK(r.pass);
  const std::size_t q = column(r, "q"), p = column(r, "p"), d0 = column(r, "d0");
  const std::size_t k = column(r, "k");
  bool applicable = false;
  for (const auto& row : r.rows) {
    const double qq = number(row[q]), pp = number(row[p]);
    CHECK(number(row[d0]) == doctest::Approx(2 * std::sin(kPi * std::abs(qq * alpha - pp))).epsilon(1e-9));
    if (number(row[d0]) <= 1.0 / 16) {
      applicable = true;
      CHECK(number(row[k]) == pp);
    }
  }
  CHECK(applicable);

  o.q_max = 50;
  CHECK_THROWS_AS(exp_rigidity(alpha, 12, tilted_field(0.3, 1.0), 0.0, o), QMaxExceeded);
}
