#include "calabi/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "calabi/arithmetic.hpp"
#include "calabi/circle.hpp"
#include "calabi/errors.hpp"
#include "calabi/mapzoo.hpp"
#include "calabi/parallel.hpp"

namespace calabi {

namespace {

double operator_norm(const Eigen::Matrix2d& m) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  return 0.5 * (std::hypot(a + d, c - b) + std::hypot(a - d, b + c));
}

struct SampledMax {
  double all = 0.0, coarse = 0.0;
  void add(double v, bool in_coarse) {
    all = std::max(all, v);
    if (in_coarse) coarse = std::max(coarse, v);
  }
  void merge(const SampledMax& o) {
    all = std::max(all, o.all);
    coarse = std::max(coarse, o.coarse);
  }
};

// Max of deviation(z) over the lattice and boundary samples. Task L (the last)
// handles the boundary.
template <typename Deviation, typename BoundaryExtra>
DistanceEstimate sampled_sup(const DistanceOptions& o, Deviation&& deviation,
                             BoundaryExtra&& boundary_extra) {
  const int n = o.lattice;
  std::vector<SampledMax> rows(n + 1);
  parallel_for(rows.size(), o.workers, [&](std::size_t i) {
    SampledMax m;
    if (static_cast<int>(i) == n) {
      for (int k = 0; k < o.boundary; ++k) {
        const double x = static_cast<double>(k) / o.boundary;
        m.add(std::max(deviation(circle_point(x)), boundary_extra(x)), k % 2 == 0);
      }
    } else {
      const double u = -1.0 + (i + 0.5) * 2.0 / n;
      for (int j = 0; j < n; ++j) {
        const double v = -1.0 + (j + 0.5) * 2.0 / n;
        if (u * u + v * v > 1.0) continue;
        m.add(deviation(Point(u, v)), i % 2 == 0 && j % 2 == 0);
      }
    }
    rows[i] = m;
  });
  SampledMax total;
  for (const auto& r : rows) total.merge(r);
  return {total.all, total.all - total.coarse};
}

}  // namespace

DistanceEstimate c0_distance(const MapBundle& f, const DistanceOptions& options) {
  if (f.isotopy().is_identity()) return {};
  const MapBundle g = inverse(f);
  return sampled_sup(
      options,
      [&](const Point& z) { return std::max((f(z) - z).norm(), (g(z) - z).norm()); },
      [](double) { return 0.0; });
}

DistanceEstimate c1_distance(const MapBundle& f, const DistanceOptions& options) {
  if (f.isotopy().is_identity()) return {};
  const MapBundle g = inverse(f);
  const LiftedCircleMap phi = boundary_lift(f), psi = boundary_lift(g);
  const Jacobian id = Jacobian::Identity();
  return sampled_sup(
      options,
      [&](const Point& z) {
        const auto [fz, df] = f.isotopy().map_with_jacobian(z);
        const auto [gz, dg] = g.isotopy().map_with_jacobian(z);
        return std::max({(fz - z).norm(), (gz - z).norm(), operator_norm(df - id),
                         operator_norm(dg - id)});
      },
      [&](double x) { return std::max(std::abs(phi(x) - x), std::abs(psi(x) - x)); });
}

ExperimentResult exp_c1_continuity(const std::vector<double>& scales, const C1Options& options) {
  if (scales.empty()) throw ConfigError("c1-continuity needs at least one scale");
  for (double t : scales)
    if (t < 0.0) throw ConfigError("scales must be non-negative");
  const HamiltonianField base = twist_field(Polynomial{options.twist});

  ExperimentResult out;
  out.name = "c1-continuity";
  out.columns = {"tau",       "d1",         "d1_refinement_delta", "cal2",      "cal2_stderr",
                 "cal_closed_form", "bound_sqrt(2*d1)/pi+3*stderr", "bound_pass",
                 "max_abs_cos_2pi_ang_minus_1", "bound_2*d1", "cos_pass", "pass"};
  out.rows.resize(scales.size());
  std::vector<double> cals(scales.size());
  std::vector<bool> passes(scales.size());

  parallel_for(scales.size(), options.workers, [&](std::size_t i) {
    const double tau = scales[i];
    const MapBundle f = tau == 0.0 ? identity_map() : flow_bundle(base, tau);
    DistanceOptions d = options.distance;
    d.workers = 1;
    const DistanceEstimate eps = c1_distance(f, d);
    if (eps.value > 0.5)
      throw ScaleTooLarge("tau = " + std::to_string(tau) + " gives d1 = " +
                          std::to_string(eps.value) + " > 1/2");
    PairSampler sampler;
    sampler.count = options.pairs;
    sampler.seed = options.seed;
    const MonteCarloEstimate cal = cal2_tilde(f, sampler);
    const double bound = std::sqrt(2.0 * eps.value) / kPi + 3.0 * cal.standard_error;

    std::mt19937_64 rng(options.seed + 0x9e3779b97f4a7c15ULL);
    double cos_defect = 0.0;
    for (std::size_t k = 0; k < options.cosine_pairs; ++k) {
      const Point x = sample_disk(rng);
      Point y = sample_disk(rng);
      while ((x - y).norm() < 1e-6) y = sample_disk(rng);
      const double a = angle_function(f, x, y).value;
      cos_defect = std::max(cos_defect, std::abs(std::cos(kTwoPi * a) - 1.0));
    }
    const bool bound_pass = std::abs(cal.value) <= bound;
    const bool cos_pass = cos_defect <= 2.0 * eps.value;
    cals[i] = cal.value;
    passes[i] = bound_pass && cos_pass;
    out.rows[i] = {tau,
                   eps.value,
                   eps.refinement_delta,
                   cal.value,
                   cal.standard_error,
                   f.closed_form().cal_tilde.value_or(0.0),
                   bound,
                   bound_pass,
                   cos_defect,
                   2.0 * eps.value,
                   cos_pass,
                   passes[i]};
  });

  out.pass = std::all_of(passes.begin(), passes.end(), [](bool b) { return b; });
  std::vector<std::size_t> order(scales.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scales[a] > scales[b]; });
  bool monotone = true;
  for (std::size_t k = 1; k < order.size(); ++k)
    monotone = monotone && std::abs(cals[order[k]]) <= std::abs(cals[order[k - 1]]);
  out.notes.push_back(std::string("|cal2| decreases with tau: ") + (monotone ? "yes" : "no"));
  return out;
}

ExperimentResult exp_c0_discontinuity(const std::vector<int>& ns, const C0Options& options) {
  if (ns.empty()) throw ConfigError("c0-discontinuity needs at least one n");
  for (int n : ns)
    if (n < 2) throw ConfigError("bump needs n >= 2");
  const double target = 2.0 / kPi;

  ExperimentResult out;
  out.name = "c0-discontinuity";
  out.columns = {"n",    "d0",        "d0_refinement_delta", "bound_2/n", "d0_pass",
                 "cal3", "cal3_richardson_delta", "target_2/pi", "cal_residual", "cal_pass",
                 "pass"};
  out.rows.resize(ns.size());
  std::vector<double> d0(ns.size());
  std::vector<bool> passes(ns.size());

  parallel_for(ns.size(), options.workers, [&](std::size_t i) {
    const int n = ns[i];
    const MapBundle f = bump(n);
    DistanceOptions d = options.distance;
    d.workers = 1;
    const DistanceEstimate eps = c0_distance(f, d);
    Cal3Options c3;
    // Panel edges land on the plateau joins at r = 1/(2n) and r = 1/n.
    c3.grid = PolarGrid{options.panels_per_n * n, 4, 16};
    const QuadratureResult cal = cal3_tilde(f, c3);
    const double residual = std::abs(cal.value - target);
    const bool d0_pass = eps.value <= 2.0 / n;
    const bool cal_pass = residual <= options.cal_tolerance;
    d0[i] = eps.value;
    passes[i] = d0_pass && cal_pass;
    out.rows[i] = {static_cast<std::int64_t>(n), eps.value, eps.refinement_delta, 2.0 / n, d0_pass,
                   cal.value, cal.richardson_delta.value_or(0.0), target, residual, cal_pass,
                   passes[i]};
  });

  std::vector<std::size_t> order(ns.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ns[a] < ns[b]; });
  bool decreasing = true;
  for (std::size_t k = 1; k < order.size(); ++k)
    decreasing = decreasing && d0[order[k]] < d0[order[k - 1]];
  const double smallest = *std::min_element(d0.begin(), d0.end());

  out.pass = decreasing && std::all_of(passes.begin(), passes.end(), [](bool b) { return b; });
  out.notes.push_back(std::string("d0 decreasing in n: ") + (decreasing ? "yes" : "no"));
  out.notes.push_back("smallest d0 = " + std::to_string(smallest) +
                      (smallest < options.small_distance ? " (below " : " (not below ") +
                      std::to_string(options.small_distance) + ")");
  return out;
}

ExperimentResult exp_rigidity(double alpha, int depth, const HamiltonianField& conjugator,
                              double tau, const RigidityOptions& options) {
  const ContinuedFraction cf = continued_fraction(alpha, depth);
  struct Stage {
    std::size_t n;
    std::int64_t p, q;
  };
  std::vector<Stage> stages;
  for (std::size_t n = 0; n < cf.exact_terms(); ++n) {
    if (cf.q[n] > options.q_max)
      throw QMaxExceeded("q_" + std::to_string(n) + " = " + std::to_string(cf.q[n]) +
                         " exceeds q_max = " + std::to_string(options.q_max));
    if (!stages.empty() && stages.back().q == cf.q[n]) continue;
    stages.push_back({n, cf.p[n], cf.q[n]});
  }

  const MapBundle f = conjugated_rotation(Turns(alpha), conjugator, tau, options.flow);
  const Budgets& b = options.budgets;
  Cal1Options c1 = b.cal1;
  c1.workers = 1;
  const double rho = rotation_number(boundary_lift(f), b.rho_iterates).value.value;
  const double cal1_f = cal1(f, default_boundary_measure(f, b), c1).value;

  ExperimentResult out;
  out.name = "rigidity";
  out.columns = {"n",        "q",           "p",          "d0",          "d0_refinement_delta",
                 "cal1_q",   "cal1_drift",  "drift_budget", "k",         "far_pairs",
                 "max_abs_ang_minus_k", "bound_2*d0^(1/4)/pi", "single_k", "abs_k/q-rho",
                 "bound_1/q+2*d0^(1/4)/pi", "pass"};
  out.rows.resize(stages.size());
  std::vector<int> status(stages.size());  // 1 pass, 0 fail, -1 not applicable

  parallel_for(stages.size(), options.workers, [&](std::size_t i) {
    const Stage& s = stages[i];
    const double q = static_cast<double>(s.q);
    const MapBundle fq = conjugated_rotation(Turns(q * alpha), conjugator, tau, options.flow);
    DistanceOptions d = options.distance;
    d.workers = 1;
    const DistanceEstimate eps = c0_distance(fq, d);
    const double cal1_q = cal1(fq, default_boundary_measure(fq, b), c1).value;
    const double drift = std::abs(cal1_q - q * cal1_f);
    const double drift_budget = (q + 1.0) * options.cal1_tolerance;
    std::vector<Cell> row = {static_cast<std::int64_t>(s.n), s.q, s.p, eps.value,
                             eps.refinement_delta, cal1_q, drift, drift_budget};
    if (eps.value > 1.0 / 16.0) {
      for (int k = 0; k < 7; ++k) row.emplace_back(std::monostate{});
      row.emplace_back(drift <= drift_budget);
      status[i] = drift <= drift_budget ? -1 : 0;
      out.rows[i] = std::move(row);
      return;
    }
    const double min_sep = std::sqrt(eps.value);
    std::seed_seq seq{options.seed, static_cast<std::uint64_t>(s.q)};
    std::mt19937_64 rng(seq);
    std::optional<std::int64_t> k;
    bool single = true;
    double max_dev = 0.0;
    for (std::size_t j = 0; j < options.far_pairs; ++j) {
      const Point x = sample_disk(rng);
      Point y = sample_disk(rng);
      while ((x - y).norm() < min_sep) y = sample_disk(rng);
      const double a = angle_function(fq, x, y).value;
      const auto nearest = static_cast<std::int64_t>(std::llround(a));
      if (!k) k = nearest;
      single = single && nearest == *k;
      max_dev = std::max(max_dev, std::abs(a - static_cast<double>(*k)));
    }
    const double far_bound = 2.0 * std::pow(eps.value, 0.25) / kPi;
    const bool single_k = single && max_dev <= far_bound;
    const double k_error = std::abs(static_cast<double>(*k) / q - rho);
    const double k_bound = 1.0 / q + far_bound;
    const bool pass = single_k && k_error <= k_bound && drift <= drift_budget;
    row.insert(row.end(), {*k, static_cast<std::int64_t>(options.far_pairs), max_dev, far_bound,
                           single_k, k_error, k_bound, pass});
    status[i] = pass ? 1 : 0;
    out.rows[i] = std::move(row);
  });

  const bool cal1_ok = std::abs(cal1_f) <= options.cal1_tolerance;
  const bool any_applicable = std::any_of(status.begin(), status.end(), [](int v) { return v == 1; });
  const bool no_failures = std::none_of(status.begin(), status.end(), [](int v) { return v == 0; });
  out.pass = cal1_ok && any_applicable && no_failures;
  out.notes.push_back("cal1(f) = " + std::to_string(cal1_f) + " (tolerance " +
                      std::to_string(options.cal1_tolerance) + ")");
  out.notes.push_back("rho(f) = " + std::to_string(rho));
  out.notes.push_back("far-pair checks apply to stages with d0 <= 1/16");
  for (const auto& w : cf.warnings) out.notes.push_back(w);
  return out;
}

}  // namespace calabi
