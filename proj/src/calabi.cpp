#include "calabi/calabi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <string>

#include "calabi/errors.hpp"
#include "calabi/parallel.hpp"

namespace calabi {

double pullback_difference(const MapBundle& bundle, const LiouvilleForm& lambda,
                           const Point& z, const Tangent& w) {
  const auto [fz, df] = bundle.isotopy().map_with_jacobian(z);
  return lambda(fz, df * w) - lambda(z, w);
}

namespace {

// sum_i w_i A(x_i) through the trigonometric interpolant of A sampled at
// `samples` equally spaced boundary points.
double interpolated_average(const std::vector<double>& values, const BoundaryMeasure& mu) {
  using C = std::complex<double>;
  const int m = static_cast<int>(values.size());
  const int half = m / 2;
  double total = 0.0;
  for (int k = -half; k <= half; ++k) {
    C coeff(0.0, 0.0);
    for (int j = 0; j < m; ++j) coeff += values[j] * std::polar(1.0, -kTwoPi * k * j / m);
    coeff /= static_cast<double>(m);
    C moment(0.0, 0.0);
    for (std::size_t i = 0; i < mu.points.size(); ++i)
      moment += mu.weights[i] * std::polar(1.0, kTwoPi * k * mu.points[i]);
    const double nyquist = (m % 2 == 0 && std::abs(k) == half) ? 0.5 : 1.0;
    total += nyquist * (coeff * moment).real();
  }
  return total;
}

}  // namespace

ActionFunction::ActionFunction(MapBundle bundle, const BoundaryMeasure& mu,
                               const ActionOptions& options)
    : bundle_(std::move(bundle)),
      lambda_(options.lambda),
      radial_(gauss_legendre(std::max(1, options.radial_nodes / std::max(1, options.radial_panels)))),
      panels_(std::max(1, options.radial_panels)) {
  area_residual_ = calabi::area_residual(bundle_, options.area_samples, options.area_seed);
  if (area_residual_ > 10.0 * options.tol_area)
    throw NotAreaPreserving("|det Df - 1| reaches " + std::to_string(area_residual_));

  Point w(0.0, 0.0);
  for (const Piece& p : bundle_.isotopy().pieces()) {
    pieces_.emplace_back("piece", DiskIsotopy({p}));
    offsets_.push_back(segment(pieces_.back(), w));
    w = p.advance(w);
  }

  if (mu.points.size() <= options.direct_limit) {
    for (std::size_t i = 0; i < mu.points.size(); ++i)
      normalization_ += mu.weights[i] * base(circle_point(mu.points[i]));
  } else {
    std::vector<double> values(options.boundary_samples);
    for (int j = 0; j < options.boundary_samples; ++j)
      values[j] = base(circle_point(static_cast<double>(j) / options.boundary_samples));
    normalization_ = interpolated_average(values, mu);
  }
}

double ActionFunction::segment(const MapBundle& piece, const Point& z) const {
  // int_0^r (P*lambda - lambda)_{rho e}(e) drho, with panel edges at the fixed
  // radii k / panels whatever |z| is.
  const double r = z.norm();
  if (r == 0.0) return 0.0;
  const Point e = z / r;
  double sum = 0.0;
  for (int k = 0; k < panels_ && k < r * panels_; ++k) {
    const double a = static_cast<double>(k) / panels_;
    const double b = std::min(r, static_cast<double>(k + 1) / panels_);
    for (std::size_t i = 0; i < radial_.nodes.size(); ++i) {
      const double rho = a + (b - a) * radial_.nodes[i];
      sum += (b - a) * radial_.weights[i] * pullback_difference(piece, lambda_, rho * e, e);
    }
  }
  return sum;
}

double ActionFunction::base(const Point& z) const {
  double sum = 0.0;
  Point x = z;
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    sum += segment(pieces_[k], x) - offsets_[k];
    if (k + 1 < pieces_.size()) x = pieces_[k](x);
  }
  return sum;
}

ActionFunction action_function(const MapBundle& bundle, const BoundaryMeasure& mu,
                               const ActionOptions& options) {
  return ActionFunction(bundle, mu, options);
}

Cal1Result cal1(const MapBundle& bundle, const BoundaryMeasure& mu, const Cal1Options& options) {
  const ActionFunction action(bundle, mu, options.action);

  // The maps z -> z_{k-1} preserve omega, so
  //   int_D A0 omega = sum_k int_D A0_{P_k} omega - A0_{P_k}(w_{k-1}),
  // and int_D A0_P omega = (1/2pi) int dtheta int_0^1 F(s, theta) (1 - s^2) ds with
  // F(s, theta) = (P*lambda - lambda)_{s e}(e): swapping the order of the radial
  // line integral and the area integral turns the nested quadrature into one.
  auto integrate = [&](const ActionFunction& a, const PolarGrid& grid) {
    const QuadratureRule rule = composite_gauss_legendre(grid.radial_panels, grid.radial_order);
    double total = 0.0;
    for (std::size_t k = 0; k < a.pieces().size(); ++k) {
      const MapBundle& piece = a.pieces()[k];
      std::vector<double> rows(grid.angular, 0.0);
      parallel_for(rows.size(), options.workers, [&](std::size_t j) {
        const Point e = circle_point((j + 0.5) / grid.angular);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          const double s = rule.nodes[i];
          sum += rule.weights[i] * (1.0 - s * s) *
                 pullback_difference(piece, a.lambda(), s * e, e);
        }
        rows[j] = sum;
      });
      total += std::accumulate(rows.begin(), rows.end(), 0.0) / grid.angular - a.offsets()[k];
    }
    return total;
  };

  Cal1Result out;
  out.normalization = action.normalization();
  out.area_residual = action.area_residual();
  const double coarse = integrate(action, options.grid);
  out.value = coarse - out.normalization;
  if (options.richardson) {
    // The refined estimate also doubles the radial resolution of the normalization.
    ActionOptions finer = options.action;
    finer.radial_nodes *= 2;
    finer.radial_panels *= 2;
    const ActionFunction refined_action(bundle, mu, finer);
    const double refined =
        integrate(refined_action, options.grid.refined()) - refined_action.normalization();
    out.richardson_delta = std::abs(refined - out.value);
  }
  return out;
}

namespace {

double chord_rate(const Piece& piece, double s, const Point& x, const Point& y) {
  const Tangent d = x - y;
  const Tangent dd = piece.velocity(s, x) - piece.velocity(s, y);
  return std::abs(d(0) * dd(1) - d(1) * dd(0)) / (d.squaredNorm() * kTwoPi);
}

// Winding of the chord across one piece, or nothing when the sampling is too
// coarse to follow it.
std::optional<double> piece_winding(const Piece& piece, const std::vector<Point>& tx,
                                    const std::vector<Point>& ty) {
  const int m = static_cast<int>(tx.size()) - 1;
  double sum = 0.0;
  double previous_rate = chord_rate(piece, 0.0, tx[0], ty[0]);
  for (int j = 1; j <= m; ++j) {
    const Tangent d0 = tx[j - 1] - ty[j - 1];
    const Tangent d1 = tx[j] - ty[j];
    if (d1.norm() < kZeroVectorTol) throw ZeroVector("trajectories collided");
    const double gap = turn_gap(d0, d1);
    const double rate = chord_rate(piece, static_cast<double>(j) / m, tx[j], ty[j]);
    if (std::abs(gap) >= 0.25 || std::max(previous_rate, rate) / m >= 0.25) return std::nullopt;
    sum += gap;
    previous_rate = rate;
  }
  return sum;
}

}  // namespace

Turns angle_function(const DiskIsotopy& isotopy, const Point& x, const Point& y,
                     const AngleControls& controls) {
  if ((x - y).norm() < kZeroVectorTol) throw ZeroVector("angle function on the diagonal");
  Point px = x, py = y;
  double total = 0.0;
  for (const Piece& piece : isotopy.pieces()) {
    bool resolved = false;
    int samples = controls.base_samples;
    for (int d = 0; d <= controls.max_doublings && !resolved; ++d, samples *= 2) {
      std::vector<Point> tx = piece.trajectory(px, samples);
      std::vector<Point> ty = piece.trajectory(py, samples);
      if (auto w = piece_winding(piece, tx, ty)) {
        total += *w;
        px = tx.back();
        py = ty.back();
        resolved = true;
      }
    }
    if (!resolved)
      throw StepTooCoarse("chord winding unresolved after " +
                          std::to_string(controls.max_doublings) + " refinements");
  }
  return Turns(total);
}

namespace {

struct RunningStats {
  double n = 0.0, mean = 0.0, m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }
  void merge(const RunningStats& o) {
    if (o.n == 0.0) return;
    const double total = n + o.n;
    const double delta = o.mean - mean;
    mean += delta * o.n / total;
    m2 += o.m2 + delta * delta * n * o.n / total;
    n = total;
  }
  double variance() const { return n > 1.0 ? m2 / (n - 1.0) : 0.0; }
};

constexpr std::size_t kChunk = 256;

}  // namespace

MonteCarloEstimate cal2_tilde(const MapBundle& bundle, const PairSampler& sampler,
                              const Cal2Options& options) {
  const bool stratified = sampler.strategy == SamplingStrategy::Stratified;
  const std::size_t strata =
      stratified ? static_cast<std::size_t>(sampler.radial_strata * sampler.angular_strata) : 1;
  const std::size_t chunks = (sampler.count + kChunk - 1) / kChunk;
  std::vector<std::vector<RunningStats>> partial(chunks, std::vector<RunningStats>(strata));
  std::vector<std::size_t> retries(chunks, 0);

  parallel_for(chunks, options.workers, [&](std::size_t c) {
    std::seed_seq seq{static_cast<std::uint64_t>(sampler.seed), static_cast<std::uint64_t>(c)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t begin = c * kChunk, end = std::min(sampler.count, begin + kChunk);
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t k = i % strata;
      for (;;) {
        Point x;
        if (stratified) {
          const double s = (static_cast<double>(k / sampler.angular_strata) + unit(rng)) /
                           sampler.radial_strata;
          const double th = (static_cast<double>(k % sampler.angular_strata) + unit(rng)) /
                            sampler.angular_strata;
          x = std::sqrt(s) * circle_point(th);
        } else {
          x = sample_disk(rng);
        }
        Point y = sample_disk(rng);
        while ((x - y).norm() < sampler.min_separation) y = sample_disk(rng);
        try {
          partial[c][k].add(angle_function(bundle, x, y, options.angle).value);
          break;
        } catch (const StepTooCoarse&) {
          if (++retries[c] > static_cast<std::size_t>(options.retries_per_chunk)) throw;
        } catch (const ZeroVector&) {
          if (++retries[c] > static_cast<std::size_t>(options.retries_per_chunk)) throw;
        }
      }
    }
  });

  std::vector<RunningStats> merged(strata);
  for (const auto& chunk : partial)
    for (std::size_t k = 0; k < strata; ++k) merged[k].merge(chunk[k]);

  MonteCarloEstimate out;
  out.samples = sampler.count;
  out.retries = std::accumulate(retries.begin(), retries.end(), std::size_t{0});
  if (!stratified) {
    out.value = merged[0].mean;
    out.standard_error = std::sqrt(merged[0].variance() / std::max(1.0, merged[0].n));
  } else {
    double var = 0.0;
    for (const auto& s : merged) {
      out.value += s.mean / static_cast<double>(strata);
      var += s.variance() / std::max(1.0, s.n);
    }
    out.standard_error = std::sqrt(var) / static_cast<double>(strata);
  }
  return out;
}

namespace {

// 2 sign int_0^tau int_D (H_t - H_t|S^1) omega dt.
double hamiltonian_integral(const HamiltonianField& field, double duration, double sign,
                            const PolarGrid& grid, int time_nodes, const Cal3Options& options) {
  const QuadratureRule radial = composite_gauss_legendre(grid.radial_panels, grid.radial_order);
  auto spatial = [&](double t) {
    if (field.autonomous == false || t == 0.0) {
      const double spread = boundary_variation(field, t, options.boundary_samples);
      if (spread > options.boundary_tol)
        throw BoundaryNotConstant(field.name + " varies by " + std::to_string(spread) +
                                  " on the boundary at t = " + std::to_string(t));
    }
    const double boundary = evaluate(field, t, Point(1.0, 0.0));
    double sum = 0.0;
    for (int j = 0; j < grid.angular; ++j) {
      const Point e = circle_point((j + 0.5) / grid.angular);
      for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        const double r = radial.nodes[i];
        sum += radial.weights[i] * r * (evaluate(field, t, r * e) - boundary);
      }
    }
    return 2.0 * sum / grid.angular;
  };
  if (duration == 0.0) return 0.0;
  double integral = 0.0;
  if (field.autonomous) {
    integral = duration * spatial(0.0);
  } else {
    const int panels = std::max(1, static_cast<int>(std::ceil(duration - 1e-12)));
    const QuadratureRule times = composite_gauss_legendre(panels, time_nodes, 0.0, duration);
    for (std::size_t k = 0; k < times.nodes.size(); ++k) {
      const double t = times.nodes[k];
      integral += times.weights[k] * spatial(t - std::floor(t));
    }
  }
  return 2.0 * sign * integral;
}

}  // namespace

QuadratureResult cal3_tilde(const HamiltonianField& field, const Cal3Options& options) {
  QuadratureResult out;
  out.value = hamiltonian_integral(field, 1.0, 1.0, options.grid, options.time_nodes, options);
  if (options.richardson)
    out.richardson_delta = std::abs(
        hamiltonian_integral(field, 1.0, 1.0, options.grid.refined(), 2 * options.time_nodes,
                             options) -
        out.value);
  return out;
}

QuadratureResult cal3_tilde(const MapBundle& bundle, const Cal3Options& options) {
  auto total = [&](const PolarGrid& grid, int time_nodes) {
    double sum = 0.0;
    for (const Piece& p : bundle.isotopy().pieces())
      sum += hamiltonian_integral(p.field(), p.duration(), p.reversed() ? -1.0 : 1.0, grid,
                                  time_nodes, options);
    return sum;
  };
  QuadratureResult out;
  out.value = total(options.grid, options.time_nodes);
  if (options.richardson)
    out.richardson_delta =
        std::abs(total(options.grid.refined(), 2 * options.time_nodes) - out.value);
  return out;
}

DiskMeasure lebesgue_sample(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DiskMeasure mu;
  for (std::size_t i = 0; i < count; ++i) mu.points.push_back(sample_disk(rng));
  mu.weights.assign(count, 1.0 / static_cast<double>(count));
  return mu;
}

DiskMeasure push_forward(const MapBundle& bundle, const DiskMeasure& mu) {
  DiskMeasure out = mu;
  for (Point& p : out.points) p = bundle(p);
  return out;
}

double c_mu_tilde(const MapBundle& bundle, const DiskMeasure& mu, const AngleControls& controls,
                  int workers) {
  const std::size_t n = mu.points.size();
  std::vector<double> rows(n, 0.0);
  parallel_for(n, workers, [&](std::size_t i) {
    double sum = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((mu.points[i] - mu.points[j]).norm() < kZeroVectorTol) continue;
      sum += mu.weights[j] * angle_function(bundle, mu.points[i], mu.points[j], controls).value;
    }
    rows[i] = 2.0 * mu.weights[i] * sum;
  });
  return std::accumulate(rows.begin(), rows.end(), 0.0);
}

CMuEstimate c_mu_lebesgue(const MapBundle& bundle, std::size_t points, std::uint64_t seed,
                          const AngleControls& controls, int workers) {
  const DiskMeasure mu = lebesgue_sample(points, seed);
  const std::size_t n = mu.points.size();
  CMuEstimate out;
  out.points = n;
  if (n < 2) return out;
  std::vector<double> angles(n * n, 0.0);
  parallel_for(n, workers, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j)
      angles[i * n + j] = angle_function(bundle, mu.points[i], mu.points[j], controls).value;
  });
  // Hoeffding projection: var(U) ~ 4 var(h_i) / n with h_i the row means.
  std::vector<double> row(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = angles[i * n + j];
      row[i] += a;
      row[j] += a;
      total += 2.0 * a;
    }
  const double nn = static_cast<double>(n);
  const double pair_mean = total / (nn * (nn - 1.0));
  double var = 0.0;
  for (double r : row) var += (r / (nn - 1.0) - pair_mean) * (r / (nn - 1.0) - pair_mean);
  var /= nn - 1.0;
  out.value = total / (nn * nn);
  out.standard_error = 2.0 * std::sqrt(var / nn);
  out.diagonal_deficit = std::abs(pair_mean) / nn;
  return out;
}

Turns birkhoff_angle(const MapBundle& bundle, const Point& x, const Point& y, int n,
                     const AngleControls& controls) {
  Point a = x, b = y;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    if ((a - b).norm() < 1e-9)
      throw OrbitCollision("orbits within 1e-9 after " + std::to_string(k) + " iterates");
    sum += angle_function(bundle, a, b, controls).value;
    a = bundle(a);
    b = bundle(b);
  }
  return Turns(sum / n);
}

std::optional<double> CalabiReport::residual_link() const {
  if (!cal1 || !cal2 || !rho) return std::nullopt;
  return std::abs(cal2->value - cal1->value - rho->value.value);
}

std::optional<double> CalabiReport::residual_23() const {
  if (!cal2 || !cal3) return std::nullopt;
  return std::abs(cal2->value - cal3->value);
}

std::optional<double> CalabiReport::link_budget() const {
  if (!cal2) return std::nullopt;
  return 3.0 * cal2->standard_error + quadrature_budget;
}

std::optional<bool> CalabiReport::link_pass() const {
  const auto r = residual_link();
  if (!r) return std::nullopt;
  return *r <= *link_budget();
}

std::optional<bool> CalabiReport::equality_pass() const {
  const auto r = residual_23();
  if (!r) return std::nullopt;
  return *r <= *link_budget();
}

BoundaryMeasure default_boundary_measure(const MapBundle& bundle, const Budgets& budgets) {
  return invariant_measure(boundary_lift(bundle), budgets.measure_burn_in,
                           budgets.measure_samples);
}

CalabiReport verify_link(const MapBundle& bundle, const Budgets& budgets) {
  CalabiReport report;
  report.map = bundle.name();
  report.seed = budgets.pairs.seed;
  report.quadrature_budget = budgets.quadrature_budget;

  const LiftedCircleMap lift = boundary_lift(bundle);
  report.rho = rotation_number(lift, budgets.rho_iterates);

  const BoundaryMeasure mu = default_boundary_measure(bundle, budgets);
  report.measure_atoms = mu.points.size();
  report.measure_periodic = mu.periodic;

  Cal1Options c1 = budgets.cal1;
  c1.workers = budgets.workers;
  report.cal1 = cal1(bundle, mu, c1);

  Cal2Options c2;
  c2.workers = budgets.workers;
  report.cal2 = cal2_tilde(bundle, budgets.pairs, c2);
  report.cal3 = cal3_tilde(bundle, budgets.cal3);
  return report;
}

}  // namespace calabi
