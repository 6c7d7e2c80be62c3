#include "calabi/config.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "calabi/circle.hpp"
#include "calabi/errors.hpp"

namespace calabi {

namespace {

const std::set<std::string> kFamilies = {"identity", "rotation", "radial_twist",
                                         "bump", "tilted", "conjugated_rotation",
                                         "composition", "iterate", "inverse"};
const std::set<std::string> kComputations = {"cal1", "cal2", "cal3", "rho", "verify-link", "c-mu"};

void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
}

double number(const Json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
  return j.get<double>();
}

double positive(const Json& j, const std::string& key) {
  const double v = number(j, key);
  if (!(v > 0.0)) throw ConfigError("'" + key + "' must be positive");
  return v;
}

int positive_int(const Json& j, const std::string& key) {
  if (!j.is_number_integer() || j.get<std::int64_t>() <= 0)
    throw ConfigError("'" + key + "' must be a positive integer");
  return static_cast<int>(j.get<std::int64_t>());
}

std::uint64_t seed_value(const Json& j) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
    throw ConfigError("'seed' must be a non-negative integer");
  return j.get<std::uint64_t>();
}

PolarGrid parse_grid(const Json& j, PolarGrid grid, const std::string& where) {
  require_object(j, where);
  for (const auto& [k, v] : j.items()) {
    if (k == "radial_panels") grid.radial_panels = positive_int(v, k);
    else if (k == "radial_order") grid.radial_order = positive_int(v, k);
    else if (k == "angular") grid.angular = positive_int(v, k);
    else throw ConfigError("unknown key '" + k + "' in " + where);
  }
  return grid;
}

std::vector<double> number_list(const Json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) throw ConfigError("'" + key + "' must be a non-empty array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, key));
  return out;
}

void parse_budgets(const Json& j, RunConfig& c) {
  require_object(j, "budgets");
  Budgets& b = c.budgets;
  for (const auto& [k, v] : j.items()) {
    if (k == "pairs") b.pairs.count = static_cast<std::size_t>(positive_int(v, k));
    else if (k == "strategy") {
      const std::string s = v.is_string() ? v.get<std::string>() : "";
      if (s == "uniform") b.pairs.strategy = SamplingStrategy::Uniform;
      else if (s == "stratified") b.pairs.strategy = SamplingStrategy::Stratified;
      else throw ConfigError("'strategy' must be \"uniform\" or \"stratified\"");
    } else if (k == "radial_strata") b.pairs.radial_strata = positive_int(v, k);
    else if (k == "angular_strata") b.pairs.angular_strata = positive_int(v, k);
    else if (k == "min_separation") b.pairs.min_separation = positive(v, k);
    else if (k == "cal1_grid") b.cal1.grid = parse_grid(v, b.cal1.grid, k);
    else if (k == "radial_nodes") b.cal1.action.radial_nodes = positive_int(v, k);
    else if (k == "tol_area") b.cal1.action.tol_area = positive(v, k);
    else if (k == "richardson") {
      if (!v.is_boolean()) throw ConfigError("'richardson' must be a boolean");
      b.cal1.richardson = b.cal3.richardson = v.get<bool>();
    } else if (k == "cal3_grid") b.cal3.grid = parse_grid(v, b.cal3.grid, k);
    else if (k == "time_nodes") b.cal3.time_nodes = positive_int(v, k);
    else if (k == "rho_iterates") b.rho_iterates = positive_int(v, k);
    else if (k == "measure_burn_in") {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        throw ConfigError("'measure_burn_in' must be a non-negative integer");
      b.measure_burn_in = v.get<int>();
    } else if (k == "measure_samples") b.measure_samples = positive_int(v, k);
    else if (k == "quadrature_budget") b.quadrature_budget = positive(v, k);
    else if (k == "c_mu_points") c.c_mu_points = static_cast<std::size_t>(positive_int(v, k));
    else if (k == "lattice") c.distance.lattice = positive_int(v, k);
    else if (k == "boundary") c.distance.boundary = positive_int(v, k);
    else throw ConfigError("unknown key '" + k + "' in budgets");
  }
}

void parse_output(const Json& j, OutputConfig& o) {
  require_object(j, "output");
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw ConfigError("'" + k + "' in output must be a string");
    if (k == "dir") o.dir = v.get<std::string>();
    else if (k == "format") o.format = parse_format(v.get<std::string>());
    else if (k == "stem") o.stem = v.get<std::string>();
    else throw ConfigError("unknown key '" + k + "' in output");
  }
}

std::uint64_t require_seed(const RunConfig& c, const std::string& what) {
  if (!c.seed) throw ConfigError(what + " is Monte Carlo and needs a seed (config or --seed)");
  return *c.seed;
}

// Experiment parameters with a check that every key is recognised.
class ExperimentParams {
 public:
  ExperimentParams(const Json& j, std::set<std::string> allowed) : j_(j) {
    require_object(j, "experiment");
    allowed.insert("name");
    for (const auto& [k, v] : j.items())
      if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in experiment");
  }
  bool has(const std::string& k) const { return j_.contains(k); }
  const Json& operator[](const std::string& k) const { return j_.at(k); }

 private:
  const Json& j_;
};

}  // namespace

OutputFormat parse_format(const std::string& name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  if (name == "both") return OutputFormat::Both;
  throw ConfigError("format must be json, csv or both");
}

FamilySpec parse_family(const Json& j) {
  require_object(j, "map spec");
  if (!j.contains("family") || !j["family"].is_string())
    throw ConfigError("map spec needs a string 'family'");
  FamilySpec spec;
  spec.family = j["family"].get<std::string>();
  if (!kFamilies.count(spec.family)) throw ConfigError("unknown family '" + spec.family + "'");
  for (const auto& [k, v] : j.items()) {
    if (k == "family") continue;
    if (k == "coefficients") {
      spec.coefficients = number_list(v, k);
    } else if (k == "operands") {
      if (!v.is_array()) throw ConfigError("'operands' must be an array");
      for (const auto& o : v) spec.operands.push_back(parse_family(o));
    } else if (k == "operand" || k == "conjugator") {
      spec.operands.push_back(parse_family(v));
    } else if (v.is_number()) {
      spec.parameters[k] = v.get<double>();
    } else {
      throw ConfigError("unexpected key '" + k + "' in " + spec.family + " spec");
    }
  }
  return spec;
}

RunConfig parse_config(const Json& j, const Overrides& overrides) {
  require_object(j, "config");
  RunConfig c;
  for (const auto& [k, v] : j.items()) {
    if (k == "map") c.map = parse_family(v);
    else if (k == "compute") {
      if (!v.is_array()) throw ConfigError("'compute' must be an array");
      for (const auto& s : v) {
        if (!s.is_string() || !kComputations.count(s.get<std::string>()))
          throw ConfigError("unknown computation " + s.dump());
        c.compute.insert(s.get<std::string>());
      }
    } else if (k == "seed") c.seed = seed_value(v);
    else if (k == "workers") c.workers = positive_int(v, k);
    else if (k == "budgets") parse_budgets(v, c);
    else if (k == "output") parse_output(v, c.output);
    else if (k == "experiment") {
      require_object(v, "experiment");
      c.experiment = v;
    } else throw ConfigError("unknown top-level key '" + k + "'");
  }
  if (c.compute.empty()) c.compute.insert("verify-link");
  if (overrides.seed) c.seed = overrides.seed;
  if (overrides.workers) {
    if (*overrides.workers < 1) throw ConfigError("--workers must be positive");
    c.workers = *overrides.workers;
  }
  if (overrides.out) c.output.dir = *overrides.out;
  if (overrides.format) c.output.format = *overrides.format;
  c.budgets.workers = c.workers;
  c.budgets.cal1.workers = c.workers;
  c.distance.workers = c.workers;
  if (c.seed) c.budgets.pairs.seed = *c.seed;
  return c;
}

RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  Json j;
  try {
    j = Json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j, overrides);
}

CalabiReport run_compute(const RunConfig& c) {
  if (!c.map) throw ConfigError("compute needs a 'map' spec");
  const bool all = c.compute.count("verify-link") > 0;
  if (all || c.compute.count("cal2") || c.compute.count("c-mu")) require_seed(c, "this computation");
  const MapBundle bundle = build_map(*c.map);
  const Budgets& b = c.budgets;

  CalabiReport report;
  if (all) {
    report = verify_link(bundle, b);
  } else {
    report.map = bundle.name();
    report.seed = c.seed.value_or(0);
    report.quadrature_budget = b.quadrature_budget;
    if (c.compute.count("rho")) report.rho = rotation_number(boundary_lift(bundle), b.rho_iterates);
    if (c.compute.count("cal1")) {
      const BoundaryMeasure mu = default_boundary_measure(bundle, b);
      report.measure_atoms = mu.points.size();
      report.measure_periodic = mu.periodic;
      report.cal1 = cal1(bundle, mu, b.cal1);
    }
    if (c.compute.count("cal2")) {
      Cal2Options o;
      o.workers = c.workers;
      report.cal2 = cal2_tilde(bundle, b.pairs, o);
    }
    if (c.compute.count("cal3")) report.cal3 = cal3_tilde(bundle, b.cal3);
  }
  if (c.compute.count("c-mu")) {
    const CMuEstimate e = c_mu_lebesgue(bundle, c.c_mu_points, *c.seed, {}, c.workers);
    report.c_mu = e.value;
    report.c_mu_budget = 3.0 * e.standard_error + e.diagonal_deficit;
  }
  return report;
}

ExperimentResult run_experiment(const std::string& name, const RunConfig& c) {
  const Json& j = c.experiment;
  if (name == "c1-continuity") {
    const ExperimentParams p(j, {"scales", "twist", "pairs", "cosine_pairs"});
    C1Options o;
    o.seed = require_seed(c, "c1-continuity");
    o.pairs = c.budgets.pairs.count;
    o.distance = c.distance;
    o.workers = c.workers;
    if (p.has("twist")) o.twist = number_list(p["twist"], "twist");
    if (p.has("pairs")) o.pairs = static_cast<std::size_t>(positive_int(p["pairs"], "pairs"));
    if (p.has("cosine_pairs"))
      o.cosine_pairs = static_cast<std::size_t>(positive_int(p["cosine_pairs"], "cosine_pairs"));
    std::vector<double> scales = {0.05, 0.02, 0.01, 0.005};
    if (p.has("scales")) scales = number_list(p["scales"], "scales");
    return exp_c1_continuity(scales, o);
  }
  if (name == "c0-discontinuity") {
    const ExperimentParams p(j, {"ns", "panels_per_n", "cal_tolerance"});
    C0Options o;
    o.distance = c.distance;
    o.workers = c.workers;
    if (p.has("panels_per_n")) o.panels_per_n = positive_int(p["panels_per_n"], "panels_per_n");
    if (p.has("cal_tolerance")) o.cal_tolerance = positive(p["cal_tolerance"], "cal_tolerance");
    std::vector<int> ns = {2, 4, 8, 16};
    if (p.has("ns")) {
      ns.clear();
      for (double v : number_list(p["ns"], "ns")) {
        if (v != std::floor(v)) throw ConfigError("'ns' must hold integers");
        ns.push_back(static_cast<int>(v));
      }
    }
    return exp_c0_discontinuity(ns, o);
  }
  if (name == "rigidity") {
    const ExperimentParams p(
        j, {"alpha", "depth", "conjugator", "tau", "q_max", "far_pairs", "cal1_tolerance"});
    RigidityOptions o;
    o.seed = require_seed(c, "rigidity");
    o.budgets = c.budgets;
    o.distance = c.distance;
    o.workers = c.workers;
    if (p.has("q_max")) o.q_max = positive_int(p["q_max"], "q_max");
    if (p.has("far_pairs")) o.far_pairs = static_cast<std::size_t>(positive_int(p["far_pairs"], "far_pairs"));
    if (p.has("cal1_tolerance")) o.cal1_tolerance = positive(p["cal1_tolerance"], "cal1_tolerance");
    const double alpha = p.has("alpha") ? number(p["alpha"], "alpha") : (std::sqrt(5.0) - 1.0) / 2.0;
    const int depth = p.has("depth") ? positive_int(p["depth"], "depth") : 12;
    const double tau = p.has("tau") ? number(p["tau"], "tau") : 0.5;
    FamilySpec conj{"tilted", {{"beta", 0.3}, {"gamma", 1.0}}, {}, {}};
    if (p.has("conjugator")) conj = parse_family(p["conjugator"]);
    return exp_rigidity(alpha, depth, build_field(conj), tau, o);
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

CfTable run_cf(const CfRequest& r) {
  const int sources = (r.alpha ? 1 : 0) + (!r.quotients.empty() ? 1 : 0) + (r.synthetic ? 1 : 0);
  if (sources != 1) throw ConfigError("give exactly one of --alpha, --quotients, --synthetic");
  if (r.depth < 1) throw ConfigError("--depth must be >= 1");
  if (r.alpha) return cf_table(continued_fraction(*r.alpha, r.depth), r.alpha);
  if (r.synthetic) return cf_table(synthetic_doubly_exponential(r.depth), std::nullopt);
  return cf_table(from_quotients(r.quotients), std::nullopt);
}

std::vector<std::filesystem::path> write_outputs(const OutputConfig& o, const Json& json,
                                                 const std::string& csv) {
  std::error_code ec;
  std::filesystem::create_directories(o.dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + o.dir.string());
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::string& ext, const std::string& text) {
    const auto path = o.dir / (o.stem + ext);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path.string());
    f << text;
    written.push_back(path);
  };
  if (o.format != OutputFormat::Csv) write(".json", json.dump(2) + "\n");
  if (o.format != OutputFormat::Json) write(".csv", csv);
  return written;
}

namespace {

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    body();
    return 0;
  } catch (const ConfigError& e) {
    err << e.name() << ": " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "ConfigError: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.name() << ": " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "InternalError: " << e.what() << "\n";
    return 3;
  }
}

void list_written(std::ostream& out, const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) out << "wrote " << p.string() << "\n";
}

}  // namespace

int cmd_compute(const std::filesystem::path& config, const Overrides& overrides,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig c = load_config(config, overrides);
    if (c.output.stem.empty()) c.output.stem = "report";
    const CalabiReport r = run_compute(c);
    list_written(out, write_outputs(c.output, to_json(r), to_csv(r)));
    if (auto pass = r.link_pass())
      out << "link " << (*pass ? "PASS" : "FAIL") << ", equality "
          << (r.equality_pass().value_or(false) ? "PASS" : "FAIL") << "\n";
  });
}

int cmd_experiment(const std::string& name, const std::filesystem::path& config,
                   const Overrides& overrides, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig c = config.empty() ? parse_config(Json::object(), overrides)
                                 : load_config(config, overrides);
    if (c.output.stem.empty()) c.output.stem = name;
    const ExperimentResult r = run_experiment(name, c);
    list_written(out, write_outputs(c.output, to_json(r), to_csv(r)));
    out << name << " " << (r.pass ? "PASS" : "FAIL") << "\n";
  });
}

int cmd_cf(const CfRequest& request, const Overrides& overrides, std::ostream& out,
           std::ostream& err) {
  return guarded(err, [&] {
    const CfTable t = run_cf(request);
    const std::string csv = to_csv(t);
    out << csv;
    if (overrides.out) {
      OutputConfig o;
      o.dir = *overrides.out;
      o.format = overrides.format.value_or(OutputFormat::Both);
      o.stem = "cf";
      write_outputs(o, to_json(t), csv);
    }
    if (!t.classification.labels.empty()) {
      err << "labels:";
      for (const auto& l : t.classification.labels) err << " " << l;
      err << "\n" << t.classification.caveat << "\n";
    }
    for (const auto& w : t.cf.warnings) err << w << "\n";
  });
}

}  // namespace calabi
