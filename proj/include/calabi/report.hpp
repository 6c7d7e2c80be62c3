#pragma once

// JSON and CSV serialization. CSV column orders are fixed; JSON is the
// complete record. No timings are written, so equal inputs give equal bytes.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "calabi/arithmetic.hpp"
#include "calabi/calabi.hpp"
#include "calabi/experiments.hpp"

namespace calabi {

using Json = nlohmann::ordered_json;

/// Column order of the one-row CalabiReport CSV.
const std::vector<std::string>& report_columns();
/// Column order of the continued-fraction table.
const std::vector<std::string>& cf_columns();

Json to_json(const CalabiReport& report);
std::string to_csv(const CalabiReport& report);

Json to_json(const ExperimentResult& result);
std::string to_csv(const ExperimentResult& result);

struct CfTable {
  ContinuedFraction cf;
  std::optional<double> alpha;
  std::vector<BestApproxEntry> best_approx;
  Classification classification;
};

CfTable cf_table(const ContinuedFraction& cf, std::optional<double> alpha);
Json to_json(const CfTable& table);
std::string to_csv(const CfTable& table);

/// Round-trip decimal text for a double ("%.17g").
std::string format_number(double x);

}  // namespace calabi
