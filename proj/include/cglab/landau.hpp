#pragma once

#include <string>
#include <vector>

#include "cglab/ensemble.hpp"
#include "cglab/polyspace.hpp"

namespace cglab {

// Ω = D(c1, r1) ∩ D(c2, r2); the second disc is optional (r2 = inf)
struct Omega {
  Complex c1 = 0;
  double r1 = 0;
  Complex c2 = 0;
  double r2 = std::numeric_limits<double>::infinity();

  static Omega disc(Complex c, double r) { return {c, r, 0, std::numeric_limits<double>::infinity()}; }
  static Omega lens(Complex c, double r, Complex clip_c, double clip_r) { return {c, r, clip_c, clip_r}; }
  static Omega empty() { return {0, 0, 0, 0}; }
  bool contains(Complex z) const { return std::abs(z - c1) < r1 && std::abs(z - c2) < r2; }
};

struct ConcentrationOptions {
  double radial_width = 1.0;     // panel width in units of 1/√m
  double angular_factor = 3.5;   // angular nodes per radian per unit of r√m
  std::size_t pointwise_limit = 2000;  // node count up to which trace T² uses the double sum
};

struct ConcentrationSpectrum {
  int m = 0;
  Omega omega;
  std::vector<double> eigenvalues;  // non-increasing
  double trace = 0;     // ∫_Ω K(ζ,ζ) dA
  double trace_sq = 0;  // ∬_{Ω²} |K|²
  double eig_sum = 0;
  double eig_sq_sum = 0;
  std::size_t nodes = 0;
  bool pointwise_trace_sq = false;
};

ConcentrationSpectrum concentration(const WeightedPolySpace& space, const Omega& omega,
                                    const ConcentrationOptions& opt = {});
// Ω = the space's own quadrature domain
ConcentrationSpectrum concentration_whole(const WeightedPolySpace& space);

struct CountCheck {
  double theta = 0;
  int count = 0;     // #{λ >= θ}
  double lhs = 0;    // |count - trace|
  double rhs = 0;    // max(1/θ, 1/(1-θ)) (trace - trace²)
  bool holds = false;
};

CountCheck eig_count_check(const std::vector<double>& eigenvalues, double theta);
CountCheck eig_count_check(const ConcentrationSpectrum& spec, double theta);
// θ = 0.05, 0.10, ..., 0.95
std::vector<CountCheck> eig_count_grid(const ConcentrationSpectrum& spec);

enum class Regime { Bulk, Boundary };

struct TraceRow {
  int m = 0;
  int order = 0;  // round(m ρ)
  double L = 0;
  double rho = 1;
  double trace = 0;
  double trace_sq = 0;
  double ratio = 0;          // trace / (ρ ΔQ L²), or / (½ ρ ΔQ L²) at the boundary
  double residual_L = 0;     // (trace - trace²) / L
  double residual_LlogL = 0; // (trace - trace²) / (L log L)
  double bound_residual = 0; // max over θ of lhs - rhs (<= 0 when the counting bound holds)
  std::string note;
};

std::vector<TraceRow> trace_asymptotics(const Potential& pot, Complex p, Regime regime, double L, double rho,
                                        double M, const std::vector<int>& m_list);

struct SamplingReport {
  int order = 0;
  double mu = 0;        // smallest generalized / Gram eigenvalue
  double constant = 0;  // empirical A
  bool failed = false;
  std::string note;
};

SamplingReport mz_constant(const Configuration& cfg, const Potential& pot, double rho, double M);
SamplingReport interpolation_constant(const Configuration& cfg, const Potential& pot, double rho);

class LocalizedLagrange {
 public:
  LocalizedLagrange(const Configuration& cfg, const Potential& pot, double epsilon);
  std::vector<Complex> values(Complex z) const;
  double sum_abs(Complex z) const;
  double epsilon() const { return eps_; }
  int order() const { return space_.order(); }
  // indices j with K(ζ_j, ζ_j) below 1e-12 nε
  const std::vector<int>& lower_bound_violations() const { return violations_; }

 private:
  Configuration cfg_;
  double eps_;
  WeightedPolySpace space_;
  LagrangeBasis lagrange_;
  std::vector<double> diag_;
  std::vector<int> violations_;
};

Complex localized_lagrange(const Configuration& cfg, const Potential& pot, int j, double epsilon, Complex z);

// ε · max over a grid on S of Σ_j |L_j|
double localized_sum_constant(const Configuration& cfg, const Potential& pot, double epsilon, const Droplet& s,
                              double pitch_factor = 0.2);

struct MZReport {
  double rho_sampling = 0.8;
  double rho_interpolation = 1.25;
  double gamma = 0;
  double M = 2;
  double mz_constant = 0;
  double interp_constant = 0;
  double lagrange_sup = 0;
  bool sampling_failed = false;
  bool interpolation_failed = false;
};

MZReport mz_report(const Configuration& cfg, const Potential& pot, double rho_sampling, double rho_interp,
                   double M);

}  // namespace cglab
