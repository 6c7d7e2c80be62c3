#include "calabi/mapzoo.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "calabi/errors.hpp"

namespace calabi {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

// Quintic smootherstep and its derivatives on [0, 1].
double smootherstep(double y, int order) {
  switch (order) {
    case 0: return y * y * y * (10.0 + y * (-15.0 + 6.0 * y));
    case 1: return 30.0 * y * y * (1.0 - y) * (1.0 - y);
    default: return 60.0 * y * (1.0 - y) * (1.0 - 2.0 * y);
  }
}

// Closed forms of the time-tau flow of H = g(|z|^2), g(1) = 0.
ClosedForm radial_closed_form(const RadialProfile& g, double integral, double tau) {
  ClosedForm c;
  c.cal_tilde = 2.0 * tau * integral;
  const double edge = g.slope(1.0);
  c.boundary_shift = -tau * edge;
  c.action = [g, edge, tau](const Point& z) {
    const double s = z.squaredNorm();
    return tau * (g.value(s) - s * g.slope(s) + edge);
  };
  c.circle_winding = [g, tau](double r) { return -tau * g.slope(r * r); };
  return c;
}

std::shared_ptr<const HamiltonianField> share(const HamiltonianField& f) {
  return std::make_shared<const HamiltonianField>(f);
}

}  // namespace

double Polynomial::operator()(double s) const {
  double v = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) v = v * s + *it;
  return v;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (std::size_t k = 1; k < coefficients.size(); ++k)
    d.coefficients.push_back(static_cast<double>(k) * coefficients[k]);
  return d;
}

double Polynomial::unit_integral() const {
  double v = 0.0;
  for (std::size_t k = 0; k < coefficients.size(); ++k) v += coefficients[k] / (k + 1.0);
  return v;
}

double plateau(double x, int order) {
  if (x <= 0.5) return order == 0 ? 1.0 : 0.0;
  if (x >= 1.0) return 0.0;
  const double y = 2.0 * x - 1.0;
  switch (order) {
    case 0: return 1.0 - smootherstep(y, 0);
    case 1: return -2.0 * smootherstep(y, 1);
    default: return -4.0 * smootherstep(y, 2);
  }
}

// int_0^inf plateau(x) x dx = 2/7.
double bump_constant(int n) { return 7.0 * n * n / (4.0 * kPi); }

HamiltonianField twist_field(const Polynomial& g) {
  if (std::abs(g(1.0)) > 1e-12)
    throw BoundaryNotConstant("radial twist needs g(1) = 0, got " + num(g(1.0)));
  const Polynomial d1 = g.derivative(), d2 = d1.derivative();
  std::vector<std::pair<std::string, double>> params;
  for (std::size_t k = 0; k < g.coefficients.size(); ++k)
    params.emplace_back("c" + std::to_string(k), g.coefficients[k]);
  return radial_field("radial_twist", std::move(params),
                      RadialProfile{[g](double s) { return g(s); },
                                    [d1](double s) { return d1(s); },
                                    [d2](double s) { return d2(s); }, g.unit_integral()});
}

HamiltonianField rotation_field(double alpha) {
  return radial_field("rotation", {{"alpha", alpha}},
                      RadialProfile{[alpha](double s) { return alpha * (1.0 - s); },
                                    [alpha](double) { return -alpha; },
                                    [](double) { return 0.0; }, 0.5 * alpha});
}

HamiltonianField bump_field(int n) {
  if (n < 2) throw ConfigError("bump needs n >= 2");
  const double c = bump_constant(n);
  const double nn = n;
  const double plateau_edge = 0.5 / nn;
  RadialProfile p;
  p.value = [c, nn](double s) { return c * plateau(nn * std::sqrt(s)); };
  // G(s) = h(sqrt s): G' = h'/(2r), G'' = (h'' - h'/r)/(4 r^2); both vanish on the plateau.
  p.slope = [c, nn, plateau_edge](double s) {
    const double r = std::sqrt(s);
    if (r <= plateau_edge) return 0.0;
    return c * nn * plateau(nn * r, 1) / (2.0 * r);
  };
  p.curvature = [c, nn, plateau_edge](double s) {
    const double r = std::sqrt(s);
    if (r <= plateau_edge) return 0.0;
    const double h1 = c * nn * plateau(nn * r, 1);
    const double h2 = c * nn * nn * plateau(nn * r, 2);
    return (h2 - h1 / r) / (4.0 * s);
  };
  p.integral = 1.0 / kPi;
  return radial_field("bump", {{"n", nn}}, std::move(p));
}

HamiltonianField tilted_field(double beta, double gamma) {
  HamiltonianField f;
  f.name = "tilted";
  f.parameters = {{"beta", beta}, {"gamma", gamma}};
  f.autonomous = true;
  f.value = [=](double, const Point& z) {
    return beta * (1.0 - z.squaredNorm()) * (1.0 + gamma * z(0));
  };
  f.gradient = [=](double, const Point& z) -> Eigen::Vector2d {
    const double u = z(0), v = z(1), w = 1.0 + gamma * u;
    return beta * Eigen::Vector2d(-2.0 * u * w + gamma * (1.0 - z.squaredNorm()), -2.0 * v * w);
  };
  f.hessian = [=](double, const Point& z) -> Eigen::Matrix2d {
    const double u = z(0), v = z(1);
    Eigen::Matrix2d m;
    m << -2.0 - 6.0 * gamma * u, -2.0 * gamma * v, -2.0 * gamma * v, -2.0 - 2.0 * gamma * u;
    return beta * m;
  };
  return f;
}

MapBundle identity_map() {
  ClosedForm c;
  c.cal_tilde = 0.0;
  c.boundary_shift = 0.0;
  c.action = [](const Point&) { return 0.0; };
  c.circle_winding = [](double) { return 0.0; };
  return MapBundle("identity", DiskIsotopy(), c);
}

MapBundle flow_bundle(const HamiltonianField& field, double tau, const FlowControls& controls) {
  if (tau == 0.0) return identity_map();
  std::string name = field.name + "(";
  bool first = true;
  for (const auto& [k, v] : field.parameters) {
    name += (first ? "" : ",") + k + "=" + num(v);
    first = false;
  }
  if (tau != 1.0) name += std::string(first ? "" : ",") + "tau=" + num(tau);
  name += ")";
  ClosedForm closed;
  if (field.radial && field.radial->integral)
    closed = radial_closed_form(*field.radial, *field.radial->integral, tau);
  return MapBundle(std::move(name), DiskIsotopy({Piece(share(field), tau, false, controls)}),
                   std::move(closed));
}

MapBundle rotation(Turns alpha) {
  if (alpha.value == 0.0) return identity_map();
  return flow_bundle(rotation_field(alpha.value));
}

MapBundle radial_twist(const Polynomial& g) {
  const HamiltonianField field = twist_field(g);
  if (std::all_of(g.coefficients.begin(), g.coefficients.end(), [](double c) { return c == 0.0; }))
    return identity_map();
  return flow_bundle(field);
}

MapBundle bump(int n) { return flow_bundle(bump_field(n)); }

MapBundle conjugated_rotation(Turns alpha, const HamiltonianField& conjugator, double tau,
                              const FlowControls& controls) {
  const MapBundle r = rotation(alpha);
  if (tau == 0.0) return r;
  const Piece h(share(conjugator), tau, false, controls);
  std::vector<Piece> pieces{h.inverted()};
  for (const Piece& p : r.isotopy().pieces()) pieces.push_back(p);
  pieces.push_back(h);
  ClosedForm closed;
  closed.cal_tilde = alpha.value;
  return MapBundle("conjugated_rotation(alpha=" + num(alpha.value) + "," + conjugator.name +
                       ",tau=" + num(tau) + ")",
                   DiskIsotopy(std::move(pieces)), std::move(closed));
}

namespace {

std::optional<double> add(const std::optional<double>& a, const std::optional<double>& b) {
  if (a && b) return *a + *b;
  return std::nullopt;
}

}  // namespace

MapBundle compose(const MapBundle& a, const MapBundle& b) {
  ClosedForm c;
  c.cal_tilde = add(a.closed_form().cal_tilde, b.closed_form().cal_tilde);
  c.boundary_shift = add(a.closed_form().boundary_shift, b.closed_form().boundary_shift);
  return MapBundle(a.name() + "*" + b.name(), b.isotopy().then(a.isotopy()), std::move(c));
}

MapBundle iterate(const MapBundle& a, int n) {
  if (n < 0) return iterate(inverse(a), -n);
  DiskIsotopy iso;
  for (int k = 0; k < n; ++k) iso = iso.then(a.isotopy());
  ClosedForm c;
  if (a.closed_form().cal_tilde) c.cal_tilde = n * *a.closed_form().cal_tilde;
  if (a.closed_form().boundary_shift) c.boundary_shift = n * *a.closed_form().boundary_shift;
  return MapBundle(a.name() + "^" + std::to_string(n), std::move(iso), std::move(c));
}

MapBundle inverse(const MapBundle& a) {
  ClosedForm c;
  if (a.closed_form().cal_tilde) c.cal_tilde = -*a.closed_form().cal_tilde;
  if (a.closed_form().boundary_shift) c.boundary_shift = -*a.closed_form().boundary_shift;
  return MapBundle(a.name() + "^-1", a.isotopy().inverse(), std::move(c));
}

double FamilySpec::parameter(const std::string& key) const {
  const auto it = parameters.find(key);
  if (it == parameters.end())
    throw ConfigError("family '" + family + "' needs parameter '" + key + "'");
  return it->second;
}

double FamilySpec::parameter(const std::string& key, double fallback) const {
  const auto it = parameters.find(key);
  return it == parameters.end() ? fallback : it->second;
}

namespace {

int integer_parameter(const FamilySpec& spec, const std::string& key) {
  const double v = spec.parameter(key);
  if (v != std::floor(v)) throw ConfigError("parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

const FamilySpec& single_operand(const FamilySpec& spec) {
  if (spec.operands.size() != 1)
    throw ConfigError("family '" + spec.family + "' needs exactly one operand");
  return spec.operands.front();
}

}  // namespace

HamiltonianField build_field(const FamilySpec& spec) {
  if (spec.family == "rotation") return rotation_field(spec.parameter("alpha"));
  if (spec.family == "radial_twist") {
    if (spec.coefficients.empty()) throw ConfigError("radial_twist needs coefficients");
    return twist_field(Polynomial{spec.coefficients});
  }
  if (spec.family == "bump") return bump_field(integer_parameter(spec, "n"));
  if (spec.family == "tilted")
    return tilted_field(spec.parameter("beta"), spec.parameter("gamma", 1.0));
  throw ConfigError("'" + spec.family + "' does not name a Hamiltonian field");
}

MapBundle build_map(const FamilySpec& spec) {
  const std::string& f = spec.family;
  if (f == "identity") return identity_map();
  if (f == "rotation" || f == "radial_twist" || f == "bump")
    return flow_bundle(build_field(spec), spec.parameter("tau", 1.0));
  if (f == "tilted") return flow_bundle(build_field(spec), spec.parameter("tau", 1.0));
  if (f == "conjugated_rotation")
    return conjugated_rotation(Turns(spec.parameter("alpha")), build_field(single_operand(spec)),
                               spec.parameter("tau"));
  if (f == "composition") {
    if (spec.operands.empty()) throw ConfigError("composition needs operands");
    MapBundle out = build_map(spec.operands.back());
    for (auto it = spec.operands.rbegin() + 1; it != spec.operands.rend(); ++it)
      out = compose(build_map(*it), out);
    return out;
  }
  if (f == "iterate") return iterate(build_map(single_operand(spec)), integer_parameter(spec, "n"));
  if (f == "inverse") return inverse(build_map(single_operand(spec)));
  throw ConfigError("unknown family '" + f + "'");
}

}  // namespace calabi
