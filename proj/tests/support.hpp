#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "calabi/field.hpp"
#include "calabi/flow.hpp"
#include "calabi/geometry.hpp"

namespace test {

// Generator whose "gradient" is (1 + u) grad H: the resulting vector field has
// nonzero divergence, so its flow does not preserve area.
inline calabi::HamiltonianField compressible_field() {
  calabi::HamiltonianField f;
  f.name = "compressible";
  f.autonomous = true;
  f.value = [](double, const calabi::Point& z) { return 0.2 * (1.0 - z.squaredNorm()); };
  f.gradient = [](double, const calabi::Point& z) -> Eigen::Vector2d {
    return (1.0 + z(0)) * (-0.4) * z;
  };
  // Exact derivative of that gradient (rows: components, columns: d/du, d/dv).
  f.hessian = [](double, const calabi::Point& z) -> Eigen::Matrix2d {
    Eigen::Matrix2d m;
    m << 2.0 * z(0) + 1.0, 0.0, z(1), 1.0 + z(0);
    return -0.4 * m;
  };
  return f;
}

// Central differences of the time-1 map with step h.
inline calabi::Jacobian central_jacobian(const calabi::MapBundle& f, const calabi::Point& z,
                                         double h) {
  calabi::Jacobian j;
  const calabi::Point du(h, 0.0), dv(0.0, h);
  j.col(0) = (f(z + du) - f(z - du)) / (2 * h);
  j.col(1) = (f(z + dv) - f(z - dv)) / (2 * h);
  return j;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("calabi_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

// Runs the CLI with `args`, capturing stdout and stderr through files.
inline Run run_cli(const std::string& args, const std::filesystem::path& dir) {
  const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string(CALABI_CLI_PATH) + " " + args + " > " + out.string() +
                          " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, read_file(out), read_file(err)};
}

}  // namespace test
