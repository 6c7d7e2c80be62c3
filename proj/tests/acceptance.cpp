// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "calabi/arithmetic.hpp"
#include "calabi/calabi.hpp"
#include "calabi/circle.hpp"
#include "calabi/config.hpp"
#include "calabi/experiments.hpp"
#include "calabi/mapzoo.hpp"
#include "support.hpp"

using namespace calabi;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
const Polynomial kTwist{{0.3, -0.6, 0.3}};

int failures = 0;

// Runs one criterion; `body` returns pass/fail and fills `detail`.
void criterion(int id, const std::string& title, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  const auto start = std::chrono::steady_clock::now();
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!pass) ++failures;
  std::printf("criterion %2d %s  %s  (%.1f s)  %s\n", id, pass ? "PASS" : "FAIL", title.c_str(),
              seconds, detail.str().c_str());
  std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

PairSampler pairs(std::uint64_t seed, std::size_t n = 20000) {
  PairSampler s;
  s.count = n;
  s.seed = seed;
  return s;
}

MapBundle tilted_flow() { return flow_bundle(tilted_field(0.3, 1.0), 0.5); }

MapBundle conjugate(double alpha) {
  return conjugated_rotation(Turns(alpha), tilted_field(0.3, 1.0), 0.5);
}

LiftedCircleMap wave(double a, double b, double c) {
  return LiftedCircleMap([=](double x) { return x + a + b * std::sin(kTwoPi * (x + c)); });
}

}  // namespace

int main() {
  criterion(1, "rotation triple", [](std::ostringstream& d) {
    bool ok = true;
    Budgets b;
    for (double alpha : {0.1, 0.3, kGolden}) {
      const auto t = std::chrono::steady_clock::now();
      const MapBundle r = rotation(Turns(alpha));
      const double c1 = cal1(r, default_boundary_measure(r, b), b.cal1).value;
      const double c3 = cal3_tilde(r).value;
      const MonteCarloEstimate c2 = cal2_tilde(r, pairs(7));
      const double secs = elapsed_since(t);
      const bool pass = std::abs(c1) <= 1e-5 && std::abs(c3 - alpha) <= 1e-6 &&
                        std::abs(c2.value - alpha) <= std::max(3 * c2.standard_error, 5e-3) &&
                        secs <= 120.0;
      ok = ok && pass;
      d << "alpha=" << alpha << ": cal1=" << c1 << " cal3-alpha=" << c3 - alpha
        << " cal2-alpha=" << c2.value - alpha << " [" << secs << " s]; ";
    }
    return ok;
  });

  criterion(2, "link identity", [](std::ostringstream& d) {
    bool ok = true;
    Budgets b;
    b.pairs = pairs(7);
    const MapBundle maps[] = {radial_twist(kTwist), bump(4),
                              compose(radial_twist(kTwist), rotation(Turns(0.2)))};
    for (const MapBundle& f : maps) {
      const CalabiReport r = verify_link(f, b);
      const double budget = *r.link_budget();
      const bool pass = *r.residual_link() <= budget && *r.residual_23() <= budget;
      ok = ok && pass;
      d << f.name() << ": link=" << *r.residual_link() << " 23=" << *r.residual_23()
        << " budget=" << budget << "; ";
      if (&f == &maps[0]) {
        // Closed-form targets (0.2, 0.2, 0.2, 0).
        const bool closed = std::abs(r.cal1->value - 0.2) <= 1e-5 &&
                            std::abs(r.cal2->value - 0.2) <= 3 * r.cal2->standard_error &&
                            std::abs(r.cal3->value - 0.2) <= 1e-6 &&
                            std::abs(r.rho->value.value) <= r.rho->rigorous_halfwidth;
        ok = ok && closed;
        d << "twist targets " << (closed ? "met" : "missed") << "; ";
      }
    }
    return ok;
  });

  criterion(3, "Cal2 morphism", [](std::ostringstream& d) {
    bool ok = true;
    const std::pair<MapBundle, MapBundle> cases[] = {
        {radial_twist(kTwist), rotation(Turns(0.2))},
        {tilted_flow(), radial_twist(kTwist)},
        {conjugate(0.2), bump(2)}};
    std::uint64_t seed = 100;
    for (const auto& [f, g] : cases) {
      const auto fg = cal2_tilde(compose(f, g), pairs(seed++));
      const auto ef = cal2_tilde(f, pairs(seed++));
      const auto eg = cal2_tilde(g, pairs(seed++));
      const double defect = std::abs(fg.value - ef.value - eg.value);
      const double se = std::sqrt(fg.standard_error * fg.standard_error +
                                  ef.standard_error * ef.standard_error +
                                  eg.standard_error * eg.standard_error);
      ok = ok && defect <= 3 * se;
      d << f.name() << " o " << g.name() << ": defect=" << defect << " 3se=" << 3 * se << "; ";
    }
    return ok;
  });

  criterion(4, "Ang cocycle", [](std::ostringstream& d) {
    const MapBundle f = tilted_flow(), g = conjugate(0.2);
    const MapBundle fg = compose(f, g);
    std::mt19937_64 rng(4);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Point x = sample_disk(rng), y = sample_disk(rng);
      const double lhs = angle_function(fg, x, y).value;
      const double rhs = angle_function(g, x, y).value + angle_function(f, g(x), g(y)).value;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    d << "max residual " << worst << " over 1000 pairs";
    return worst <= 1e-6;
  });

  criterion(5, "action primitive and independence", [](std::ostringstream& d) {
    const MapBundle f = conjugate(1.0 / 3.0);
    const LiftedCircleMap lift = boundary_lift(f);
    const BoundaryMeasure mu = invariant_measure(lift, 1000, 10000, 0.0);
    const ActionFunction a = action_function(f, mu);
    std::mt19937_64 rng(5);
    const double h = 1e-5;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Point z = 0.95 * sample_disk(rng);
      for (const Tangent& e : {Tangent(1, 0), Tangent(0, 1)}) {
        const double fd = (a(z + h * e) - a(z - h * e)) / (2 * h);
        worst = std::max(worst, std::abs(fd - pullback_difference(f, {}, z, e)));
      }
    }
    Cal1Options plain;
    Cal1Options shifted;
    shifted.action.lambda.exact_gradient = [](const Point& z) {
      return Eigen::Vector2d(0.1 * z(1), 0.1 * z(0));
    };
    const double c = cal1(f, mu, plain).value;
    const double lambda_gap = std::abs(cal1(f, mu, shifted).value - c);
    const BoundaryMeasure other = invariant_measure(lift, 1000, 10000, 0.37);
    const double mu_gap = std::abs(cal1(f, other, plain).value - c);
    d << "grad residual " << worst << ", lambda gap " << lambda_gap << ", mu gap " << mu_gap;
    return worst <= 1e-5 && lambda_gap <= 1e-5 && mu_gap <= 1e-5;
  });

  criterion(6, "rotation-number certificate", [](std::ostringstream& d) {
    const int n = 1000;
    double worst = 0.0;
    for (double alpha : {0.1, 0.3, kGolden, std::sqrt(2.0) - 1.0}) {
      const auto est = rotation_number(boundary_lift(rotation(Turns(alpha))), n);
      worst = std::max(worst, std::abs(est.value.value - alpha));
    }
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> a(-2.0, 2.0), b(-0.15, 0.15), c(0.0, 1.0);
    double defect = 0.0;
    for (int i = 0; i < 20; ++i) {
      const auto f = wave(a(rng), b(rng), c(rng)), g = wave(a(rng), b(rng), c(rng));
      defect = std::max(defect, std::abs(rotation_number(f.after(g), n).value.value -
                                         rotation_number(f, n).value.value -
                                         rotation_number(g, n).value.value));
    }
    d << "max |estimate - alpha| " << worst << " (1/n = " << 1.0 / n << "), max defect " << defect;
    return worst <= 1.0 / n && defect < 1.0 + 2.0 / n;
  });

  criterion(7, "C0 discontinuity", [](std::ostringstream& d) {
    const ExperimentResult r = exp_c0_discontinuity({2, 4, 8, 16, 32});
    bool ok = r.rows.size() == 5;
    for (const auto& row : r.rows) {
      const double n = static_cast<double>(std::get<std::int64_t>(row[0]));
      const double d0 = std::get<double>(row[1]);
      const double cal = std::get<double>(row[5]);
      ok = ok && std::abs(cal - 2.0 / kPi) <= 1e-3 && d0 <= 2.0 / n;
      d << "n=" << n << " d0=" << d0 << " cal3=" << cal << "; ";
    }
    return ok && r.pass;
  });

  criterion(8, "near-identity bounds", [](std::ostringstream& d) {
    const ExperimentResult r = exp_c1_continuity({0.05, 0.02, 0.01, 0.005});
    bool ok = !r.rows.empty();
    for (const auto& row : r.rows) {
      const double eps = std::get<double>(row[1]);
      const double cal = std::get<double>(row[3]), se = std::get<double>(row[4]);
      const double cosdev = std::get<double>(row[8]);
      if (eps > 0.5) continue;
      ok = ok && std::abs(cal) <= std::sqrt(2 * eps) / kPi + 3 * se && cosdev <= 2 * eps;
      d << "d1=" << eps << " cal2=" << cal << " cos=" << cosdev << "; ";
    }
    return ok && r.pass;
  });

  criterion(9, "rigidity of conjugated golden rotation", [](std::ostringstream& d) {
    const auto t = std::chrono::steady_clock::now();
    const ExperimentResult r = exp_rigidity(kGolden, 12, tilted_field(0.3, 1.0), 0.5);
    const double secs = elapsed_since(t);
    int applicable = 0, small = 0;
    for (const auto& row : r.rows) {
      const double q = static_cast<double>(std::get<std::int64_t>(row[1]));
      const double d0 = std::get<double>(row[3]);
      if (d0 <= 1.0 / 16) {
        ++applicable;
        if (q <= 21) ++small;
      }
    }
    d << r.rows.size() << " stages, " << applicable << " with d0 <= 1/16 (" << small
      << " of them with q <= 21); ";
    for (const auto& n : r.notes) d << n << "; ";
    d << "runtime " << secs << " s";
    return r.pass && secs <= 600.0;
  });

  criterion(10, "continued fractions", [](std::ostringstream& d) {
    const ContinuedFraction cf = continued_fraction(kGolden, 26);
    bool fib = cf.exact_terms() >= 26;
    std::int64_t f0 = 1, f1 = 1;
    for (std::size_t n = 1; fib && n <= 25; ++n) {
      fib = cf.q[n] == f1;
      const std::int64_t f2 = f0 + f1;
      f0 = f1;
      f1 = f2;
    }
    fib = fib && cf.q[0] == 1;
    std::size_t reliable = 0;
    bool inequality = true;
    for (const auto& e : best_approx_check(cf, kGolden))
      if (e.reliable) {
        ++reliable;
        inequality = inequality && e.holds;
      }
    const Classification c = classify(synthetic_doubly_exponential(8));
    const bool label =
        std::find(c.labels.begin(), c.labels.end(), "non-bruno-like") != c.labels.end();
    d << "fibonacci " << (fib ? "exact" : "wrong") << ", inequality on " << reliable
      << " reliable n " << (inequality ? "holds" : "fails") << ", synthetic "
      << (label ? "non-bruno-like" : "unlabeled");
    return fib && inequality && reliable > 0 && label;
  });

  criterion(11, "determinism", [](std::ostringstream& d) {
    const auto dir = test::scratch_dir("acceptance_determinism");
    test::write_file(dir / "c.json", R"({
      "map": {"family": "composition", "operands": [
        {"family": "radial_twist", "coefficients": [0.3, -0.6, 0.3]},
        {"family": "rotation", "alpha": 0.2}]},
      "compute": ["verify-link", "c-mu"], "seed": 11, "workers": 2,
      "output": {"dir": ")" + dir.string() + R"(", "format": "json"}})");
    std::ostringstream out, err;
    const int first = cmd_compute(dir / "c.json", {}, out, err);
    const std::string a = test::read_file(dir / "report.json");
    const int second = cmd_compute(dir / "c.json", {}, out, err);
    const std::string b = test::read_file(dir / "report.json");
    d << "exit codes " << first << "/" << second << ", " << a.size() << " bytes, "
      << (a == b ? "identical" : "different");
    return first == 0 && second == 0 && !a.empty() && a == b;
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
