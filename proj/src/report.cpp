#include "calabi/report.hpp"

#include <cstdio>
#include <sstream>

namespace calabi {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell(std::optional<double> x) { return x ? format_number(*x) : ""; }
std::string cell(std::optional<bool> x) { return x ? (*x ? "true" : "false") : ""; }

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\n";
}

Json optional_number(std::optional<double> x) { return x ? Json(*x) : Json(nullptr); }

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> columns = {
      "map",          "seed",        "cal1",          "cal1_richardson_delta", "cal2",
      "cal2_stderr",  "cal2_samples", "cal3",         "cal3_richardson_delta", "rho",
      "rho_halfwidth", "c_mu",       "c_mu_budget",   "residual_link",         "residual_23",
      "budget",       "link_pass",   "equality_pass"};
  return columns;
}

Json to_json(const CalabiReport& r) {
  Json j;
  j["map"] = r.map;
  j["seed"] = r.seed;
  if (r.cal1) {
    j["cal1"] = {{"value", r.cal1->value},
                 {"richardson_delta", optional_number(r.cal1->richardson_delta)},
                 {"normalization", r.cal1->normalization},
                 {"area_residual", r.cal1->area_residual},
                 {"measure_atoms", r.measure_atoms},
                 {"measure_periodic", r.measure_periodic}};
  }
  if (r.cal2) {
    j["cal2"] = {{"value", r.cal2->value},
                 {"stderr", r.cal2->standard_error},
                 {"samples", r.cal2->samples},
                 {"retries", r.cal2->retries}};
  }
  if (r.cal3) {
    j["cal3"] = {{"value", r.cal3->value},
                 {"richardson_delta", optional_number(r.cal3->richardson_delta)}};
  }
  if (r.rho) {
    j["rho"] = {{"value", r.rho->value.value},
                {"halfwidth", r.rho->rigorous_halfwidth},
                {"iterates", r.rho->iterates_used}};
  }
  if (r.c_mu) j["c_mu"] = {{"value", *r.c_mu}, {"budget", optional_number(r.c_mu_budget)}};
  j["quadrature_budget"] = r.quadrature_budget;
  j["budget"] = optional_number(r.link_budget());
  j["residual_link"] = optional_number(r.residual_link());
  j["residual_23"] = optional_number(r.residual_23());
  j["link_pass"] = r.link_pass() ? Json(*r.link_pass()) : Json(nullptr);
  j["equality_pass"] = r.equality_pass() ? Json(*r.equality_pass()) : Json(nullptr);
  j["conventions"] = {{"angle_unit", "turns"},
                      {"area_form", "omega = du dv / pi"},
                      {"cal3", "2 int_0^1 int_D H_t omega dt with H_t = 0 on S^1"}};
  return j;
}

std::string to_csv(const CalabiReport& r) {
  std::vector<std::string> f;
  f.push_back(r.map);
  f.push_back(std::to_string(r.seed));
  f.push_back(r.cal1 ? format_number(r.cal1->value) : "");
  f.push_back(r.cal1 ? cell(r.cal1->richardson_delta) : "");
  f.push_back(r.cal2 ? format_number(r.cal2->value) : "");
  f.push_back(r.cal2 ? format_number(r.cal2->standard_error) : "");
  f.push_back(r.cal2 ? std::to_string(r.cal2->samples) : "");
  f.push_back(r.cal3 ? format_number(r.cal3->value) : "");
  f.push_back(r.cal3 ? cell(r.cal3->richardson_delta) : "");
  f.push_back(r.rho ? format_number(r.rho->value.value) : "");
  f.push_back(r.rho ? format_number(r.rho->rigorous_halfwidth) : "");
  f.push_back(cell(r.c_mu));
  f.push_back(cell(r.c_mu_budget));
  f.push_back(cell(r.residual_link()));
  f.push_back(cell(r.residual_23()));
  f.push_back(cell(r.link_budget()));
  f.push_back(cell(r.link_pass()));
  f.push_back(cell(r.equality_pass()));
  return join(report_columns()) + join(f);
}

namespace {

std::string cell_text(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

Json cell_json(const Cell& c) {
  struct Visitor {
    Json operator()(std::monostate) const { return nullptr; }
    Json operator()(bool b) const { return b; }
    Json operator()(std::int64_t i) const { return i; }
    Json operator()(double d) const { return d; }
    Json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

}  // namespace

Json to_json(const ExperimentResult& e) {
  Json j;
  j["experiment"] = e.name;
  j["pass"] = e.pass;
  j["columns"] = e.columns;
  Json rows = Json::array();
  for (const auto& row : e.rows) {
    Json r;
    for (std::size_t i = 0; i < row.size() && i < e.columns.size(); ++i)
      r[e.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["notes"] = e.notes;
  return j;
}

std::string to_csv(const ExperimentResult& e) {
  std::string out = join(e.columns);
  for (const auto& row : e.rows) {
    std::vector<std::string> f;
    for (const auto& c : row) f.push_back(cell_text(c));
    out += join(f);
  }
  return out;
}

const std::vector<std::string>& cf_columns() {
  static const std::vector<std::string> columns = {
      "n",     "a_n",   "p_n",         "q_n",         "log_q_n",
      "ratio", "running_sum", "best_approx", "best_approx_reliable"};
  return columns;
}

CfTable cf_table(const ContinuedFraction& cf, std::optional<double> alpha) {
  CfTable t;
  t.cf = cf;
  t.alpha = alpha;
  if (alpha) t.best_approx = best_approx_check(cf, *alpha);
  if (cf.depth() >= 3) t.classification = classify(cf);
  return t;
}

Json to_json(const CfTable& t) {
  Json j;
  j["alpha"] = optional_number(t.alpha);
  j["depth"] = t.cf.depth();
  j["terminated"] = t.cf.terminated;
  j["overflowed"] = t.cf.overflowed;
  j["depth_unreliable"] = t.cf.depth_unreliable;
  Json rows = Json::array();
  for (std::size_t n = 0; n < t.cf.depth(); ++n) {
    Json r;
    r["n"] = n;
    const bool exact = n < t.cf.exact_terms();
    r["a_n"] = exact ? Json(t.cf.a[n]) : Json(nullptr);
    r["p_n"] = exact ? Json(t.cf.p[n]) : Json(nullptr);
    r["q_n"] = exact ? Json(t.cf.q[n]) : Json(nullptr);
    r["log_q_n"] = t.cf.log_q[n];
    const auto& c = t.classification;
    r["ratio"] = n < c.ratios.size() ? Json(c.ratios[n]) : Json(nullptr);
    r["running_sum"] = n < c.running_sum.size() ? Json(c.running_sum[n]) : Json(nullptr);
    if (n < t.best_approx.size()) {
      r["best_approx"] = t.best_approx[n].holds;
      r["best_approx_reliable"] = t.best_approx[n].reliable;
    } else {
      r["best_approx"] = nullptr;
      r["best_approx_reliable"] = nullptr;
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["labels"] = t.classification.labels;
  j["caveat"] = t.classification.caveat;
  j["warnings"] = t.cf.warnings;
  return j;
}

std::string to_csv(const CfTable& t) {
  std::string out = join(cf_columns());
  const Json j = to_json(t);
  for (const auto& r : j["rows"]) {
    std::vector<std::string> f;
    for (const auto& col : cf_columns()) {
      const Json& v = r[col];
      if (v.is_null()) f.emplace_back();
      else if (v.is_boolean()) f.push_back(v.get<bool>() ? "true" : "false");
      else if (v.is_number_float()) f.push_back(format_number(v.get<double>()));
      else f.push_back(v.dump());
    }
    out += join(f);
  }
  return out;
}

}  // namespace calabi
