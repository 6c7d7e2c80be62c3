#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "calabi/config.hpp"
#include "calabi/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Calabi invariant of area-preserving disk maps"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Seed (overrides the config)");
    sub->add_option("--workers", workers, "Worker threads");
    sub->add_option("--format", format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
  };

  auto* compute = app.add_subcommand("compute", "Compute Cal1, Cal2~, Cal3~ and rho for a map");
  compute->add_option("--config", config_path, "Config file (JSON)")->required();
  add_common(compute);

  std::string experiment_name;
  auto* experiment = app.add_subcommand("experiment", "Run a batch experiment");
  experiment->add_option("name", experiment_name, "c1-continuity, c0-discontinuity or rigidity")->required();
  experiment->add_option("--config", config_path, "Config file (JSON)");
  add_common(experiment);

  calabi::CfRequest cf;
  std::string quotients;
  auto* cf_cmd = app.add_subcommand("cf", "Continued fraction table");
  cf_cmd->add_option("--alpha", cf.alpha, "Real number to expand");
  cf_cmd->add_option("--quotients", quotients, "Comma-separated partial quotients a_0,a_1,...");
  cf_cmd->add_flag("--synthetic", cf.synthetic, "Use a_{n+1} = 2^{q_n}");
  cf_cmd->add_option("--depth", cf.depth, "Number of partial quotients");
  add_common(cf_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  calabi::Overrides overrides;
  overrides.seed = seed;
  overrides.workers = workers;
  if (!out_dir.empty()) overrides.out = out_dir;
  if (!format.empty()) overrides.format = calabi::parse_format(format);

  if (*compute) return calabi::cmd_compute(config_path, overrides, std::cout, std::cerr);
  if (*experiment)
    return calabi::cmd_experiment(experiment_name, config_path, overrides, std::cout, std::cerr);

  if (!quotients.empty()) {
    try {
      for (const auto& item : CLI::detail::split(quotients, ','))
        cf.quotients.push_back(std::stoll(item));
    } catch (const std::exception&) {
      std::cerr << "ConfigError: --quotients must be comma-separated integers\n";
      return 2;
    }
  }
  return calabi::cmd_cf(cf, overrides, std::cout, std::cerr);
}
