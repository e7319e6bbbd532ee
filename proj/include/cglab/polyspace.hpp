#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "cglab/ensemble.hpp"
#include "cglab/potential.hpp"
#include "cglab/quadrature.hpp"

namespace cglab {

struct SpaceData;

// 𝒲_m: q e^{-mQ/2}, deg q < m, with an L²(dA)-orthonormal basis φ_0..φ_{m-1}
class WeightedPolySpace {
 public:
  static WeightedPolySpace build(const Potential& pot, int m);

  int order() const;
  const Potential& potential() const;
  double condition_estimate() const;
  double gram_deviation() const;
  double cut_radius() const;
  // covers the support up to tail mass < 1e-14; built on first use for radial kinds
  const PlaneRule& quadrature() const;

  void basis_into(Complex z, Complex* out) const;
  std::vector<Complex> basis(Complex z) const;
  Eigen::MatrixXcd basis_matrix(const std::vector<Complex>& pts) const;  // rows = points

  Complex kernel(Complex z, Complex w) const;
  double one_point(Complex z) const;
  double berezin(Complex z, Complex w) const;
  // f = Σ c_k φ_k
  Complex eval(const Eigen::VectorXcd& coeffs, Complex z) const;

  // radial kinds only: log ||ζ^k e^{-mQ/2}||²
  double log_monomial_norm(int k) const;

 private:
  std::shared_ptr<SpaceData> d_;
};

// log ∫ |ζ|^{2k} e^{-m|ζ|^{2p}} dA by Gauss-Legendre around the peak
double radial_log_norm(int k, double m, int p);

// weighted Lagrange polynomials ℓ_j of a configuration, evaluated in log form
class LagrangeBasis {
 public:
  LagrangeBasis(const Configuration& cfg, const Potential& pot);

  int size() const { return static_cast<int>(z_.size()); }
  void values_into(Complex z, Complex* out) const;
  std::vector<Complex> values(Complex z) const;
  // log|ℓ_j(z)| for all j
  void log_abs_into(Complex z, double* out) const;

 private:
  std::vector<Complex> z_;
  std::vector<double> log_den_, arg_den_, q_;
  double n_;
  Potential pot_;
};

std::vector<Complex> lagrange(const Configuration& cfg, const Potential& pot, Complex z);

// grid points of S with pitch <= pitch_factor / sqrt(n)
std::vector<Complex> droplet_grid(const Droplet& s, double pitch);

std::vector<double> sup_norms_lagrange(const Configuration& cfg, const Potential& pot, const Droplet& s,
                                       double pitch_factor = 0.2);

struct EstimateCheck {
  double implied_c = 0;
  double bound = 0;
  bool holds = false;
  int trials = 0;
};

// implied C in |f(ζ0)|^p <= m C^p / s² ∫_{D(ζ0, s/√m)} |f|^p
double pointwise_lp_constant(const WeightedPolySpace& space, const Eigen::VectorXcd& coeffs, Complex z0,
                             double p, double s);
EstimateCheck verify_pointwise_lp(const WeightedPolySpace& space, double p, double s, int trials,
                                  std::uint64_t seed);

// implied C in |∇|f|(z0)| <= C √m avg_{D(z0,1/√m)} |f|; negative if |f(z0)| <= 1e-10
double bernstein_constant(const WeightedPolySpace& space, const Eigen::VectorXcd& coeffs, Complex z0);
EstimateCheck verify_bernstein(const WeightedPolySpace& space, int trials, std::uint64_t seed);

struct ExactIdentityResult {
  double estimate = 0;
  double target = 0;  // |U|
  double std_error = 0;
  bool inconclusive = false;
  int chains = 0;
  int samples = 0;
};

// Monte Carlo estimate of E[1_U(ζ_j) ∫ |ℓ_j|^{2β} dA] against |U|, U = D(0, u_radius)
ExactIdentityResult verify_exact_identity(const Potential& pot, int n, double beta, int chains, int sweeps,
                                          double u_radius, std::uint64_t seed, int thin = 25);

// ∫_C |ℓ_j|^{2β} dA for every j
std::vector<double> lagrange_power_mass(const Configuration& cfg, const Potential& pot, double beta);

}  // namespace cglab
