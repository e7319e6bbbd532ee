#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cglab/io.hpp"

namespace cglab {

inline constexpr const char* kToolVersion = "0.3.0";

struct PotentialSpec {
  std::string kind = "radial";  // radial | radial_harmonic
  int p = 1;
  double t = 0;
  int d = 1;

  bool operator==(const PotentialSpec&) const = default;
};

Potential make_potential(const PotentialSpec& spec);

struct RunConfig {
  std::string command;  // sample fekete kernel concentrate verify stats report
  PotentialSpec potential;
  std::vector<int> n;  // ascending
  std::optional<double> c;
  std::optional<double> beta;
  int seeds = 1;
  std::uint64_t seed = 0;
  int sweeps = 400;
  int m = 64;
  std::vector<double> L = {2, 4, 6, 8};
  std::vector<double> l = {-2, 0, 1};
  std::vector<double> center = {0, 0};
  std::string regime = "bulk";
  double rho_sampling = 0.8;
  double rho_interpolation = 1.25;
  double M = 2;
  std::string suite = "all";
  std::string family = "gibbs";  // stats without inputs: gibbs | fekete
  std::vector<std::string> inputs;
  std::string out;

  bool operator==(const RunConfig&) const = default;
};

// throws ConfigError listing every unknown key
RunConfig parse_run_config(const json& j);
json emit_run_config(const RunConfig& cfg);

struct RunOptions {
  std::string out;
  int threads = 1;
  std::uint64_t seed_offset = 0;
};

struct RunResult {
  int exit_code = 0;
  std::filesystem::path out_dir;
  std::string message;
};

RunResult run(const RunConfig& cfg, const RunOptions& opt);
RunResult run_file(const std::filesystem::path& config_file, const RunOptions& opt);

// argv entry point; returns the exit status
int cli_main(int argc, char** argv);

}  // namespace cglab
