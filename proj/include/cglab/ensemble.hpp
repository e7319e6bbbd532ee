#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cglab/potential.hpp"

namespace cglab {

// bit-reproducible across platforms: only mt19937_64 raw output is used
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform();  // [0, 1)
  double normal();
  std::uint64_t next() { return eng_(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * n) % n; }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0;
};

// seed for job k derived from a base seed (splitmix64)
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k);

enum class Provenance { Gibbs, Fekete, Synthetic };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct Configuration {
  std::vector<Complex> points;
  double beta = 0;
  std::optional<double> c;
  std::uint64_t seed = 0;
  Provenance provenance = Provenance::Synthetic;

  int n() const { return static_cast<int>(points.size()); }
};

// validates n >= 2 and finite points
Configuration make_configuration(std::vector<Complex> points, double beta = 0, std::uint64_t seed = 0,
                                 Provenance prov = Provenance::Synthetic);

// β_n = c log n
double beta_from_c(double c, int n);

// +inf if two points coincide
double hamiltonian(const Configuration& cfg, const Potential& pot);
double hamiltonian_delta(const Configuration& cfg, const Potential& pot, int j, Complex new_point);
// gradient packed as x + iy per point; throws on coincident points
std::vector<Complex> grad_hamiltonian(const Configuration& cfg, const Potential& pot);

// Metropolis acceptance test min(1, e^{-β ΔH}) against a uniform draw u
bool metropolis_accept(double delta_h, double beta, double u);

struct ChainDiagnostics {
  double acceptance_rate = 0;
  std::vector<double> energy_trace;  // one entry per sweep
  double step_scale = 0;
  int restarts = 0;
};

struct GibbsResult {
  Configuration config;
  ChainDiagnostics diagnostics;
};

GibbsResult sample_gibbs(const Potential& pot, int n, double beta, int sweeps, std::uint64_t seed);

// same chain, with a snapshot every `thin` sweeps after burn-in
std::vector<Configuration> sample_gibbs_chain(const Potential& pot, int n, double beta, int sweeps,
                                              std::uint64_t seed, int thin);

// stratified draw from the equilibrium measure of the radial part
std::vector<Complex> equilibrium_draw(const Potential& pot, int n, Rng& rng);

struct FeketeOptions {
  int sweeps_per_level = 20;
  int levels = 15;  // β = 1, 2, ..., 2^14
  int max_iterations = 20000;
  double tolerance_factor = 1e-8;  // stop when max |grad| <= factor * n
};

struct FeketeResult {
  Configuration config;
  double energy = 0;
  double grad_max = 0;
  bool converged = false;  // false: best iterate returned after line-search failure
  int iterations = 0;
};

FeketeResult fekete(const Potential& pot, int n, std::uint64_t seed, const FeketeOptions& opt = {});

}  // namespace cglab
