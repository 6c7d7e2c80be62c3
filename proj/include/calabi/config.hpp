#pragma once

// Run configuration (JSON) and the compute / experiment / cf commands.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "calabi/calabi.hpp"
#include "calabi/experiments.hpp"
#include "calabi/mapzoo.hpp"
#include "calabi/report.hpp"

namespace calabi {

enum class OutputFormat { Json, Csv, Both };

struct OutputConfig {
  std::filesystem::path dir = ".";
  OutputFormat format = OutputFormat::Both;
  std::string stem;
};

struct RunConfig {
  std::optional<FamilySpec> map;
  std::set<std::string> compute;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  Budgets budgets;
  std::size_t c_mu_points = 200;
  DistanceOptions distance;
  OutputConfig output;
  /// Experiment section, kept as parsed JSON for the experiment runners.
  Json experiment = Json::object();
};

/// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::filesystem::path> out;
  std::optional<OutputFormat> format;
};

FamilySpec parse_family(const Json& j);
RunConfig parse_config(const Json& j, const Overrides& overrides = {});
RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});
OutputFormat parse_format(const std::string& name);

CalabiReport run_compute(const RunConfig& config);
ExperimentResult run_experiment(const std::string& name, const RunConfig& config);

struct CfRequest {
  std::optional<double> alpha;
  std::vector<std::int64_t> quotients;
  bool synthetic = false;
  int depth = 20;
};

CfTable run_cf(const CfRequest& request);

/// Writes <dir>/<stem>.json and/or .csv; returns the written paths.
std::vector<std::filesystem::path> write_outputs(const OutputConfig& output, const Json& json,
                                                 const std::string& csv);

/// Entry points used by the executable. Return the process exit code:
/// 0 success, 2 configuration error, 3 numerical failure (error name on `err`).
int cmd_compute(const std::filesystem::path& config, const Overrides& overrides,
                std::ostream& out, std::ostream& err);
int cmd_experiment(const std::string& name, const std::filesystem::path& config,
                   const Overrides& overrides, std::ostream& out, std::ostream& err);
int cmd_cf(const CfRequest& request, const Overrides& overrides, std::ostream& out,
           std::ostream& err);

}  // namespace calabi
