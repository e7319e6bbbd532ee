#pragma once

#include <string>
#include <vector>

#include "cglab/ensemble.hpp"
#include "cglab/landau.hpp"

namespace cglab {

// √n · min pairwise distance, grid hashing
double spacing(const Configuration& cfg);
double spacing(const std::vector<Complex>& pts, int n);

struct DiscCount {
  int n = 0;
  int n_minus = 0;
  int n_plus = 0;
};

// open discs D(p, L/√n), D(p, (L∓s)/√n)
DiscCount count_disc(const Configuration& cfg, Complex p, double L, double s);

enum class ZoomRule { Fixed, BoundaryNormal, Adversarial };

struct Zoom {
  ZoomRule rule = ZoomRule::Fixed;
  Complex point = 0;                 // Fixed
  double theta = 0;                  // BoundaryNormal: boundary point direction
  double l = 0;                      // BoundaryNormal: offset in units of 1/√(nΔQ)
  Regime regime = Regime::Bulk;      // Adversarial: discs inside S, or centred on ∂S

  static Zoom fixed(Complex p) { return {ZoomRule::Fixed, p, 0, 0, Regime::Bulk}; }
  static Zoom boundary(double theta, double l) { return {ZoomRule::BoundaryNormal, 0, theta, l, Regime::Boundary}; }
  static Zoom adversarial(Regime r) { return {ZoomRule::Adversarial, 0, 0, 0, r}; }
};

// q + l/√(nΔQ(q)) · normal(q), q the boundary point at angle theta
Complex boundary_zoom_point(const Potential& pot, const Droplet& s, int n, double theta, double l);

// distance from z to the complement of S (0 outside)
double inner_distance(const Droplet& s, Complex z);

// candidate centres for adversarial zooming, pitch 0.5/√n
std::vector<Complex> adversarial_centers(const Droplet& s, int n, double L, Regime regime);

struct ZoomCounts {
  int min_count = 0;
  int max_count = 0;
  Complex argmin = 0, argmax = 0;
  double delta_q = 0;  // ΔQ at the (first) zoom point
};

ZoomCounts zoom_counts(const Configuration& cfg, const Potential& pot, const Zoom& zoom, double L);

struct DensityRow {
  double L = 0;
  double tail_min = 0;  // min over tail of N/L²
  double tail_max = 0;
  double expected = 0;  // ΔQ(p*), ½ΔQ(p*) or 0
};

// tail = configurations whose n lies in the upper half of the n-grid
std::vector<Configuration> family_tail(const std::vector<Configuration>& family);

std::vector<DensityRow> bl_density(const std::vector<Configuration>& family, const Potential& pot,
                                   const Zoom& zoom, const std::vector<double>& L_grid);

struct DiscrepancyResult {
  double L = 0;
  double residual = 0;    // max |N − expected·L²| over tail
  double normalized = 0;  // residual / L^{5/3}, or / (L^{5/3} log L) at the boundary
};

DiscrepancyResult discrepancy(const std::vector<Configuration>& family, const Potential& pot, const Zoom& zoom,
                              double L, Regime regime);

// max_j δ(ζ_j)
double vacuum_distance(const Configuration& cfg, const Droplet& s);

// bond-orientational order over masked points, 6 nearest neighbours
double psi6(const std::vector<Complex>& pts, const std::vector<bool>& bulk_mask);
double psi6(const Configuration& cfg, const Droplet& s, double bulk_margin);

struct CountRow {
  Complex p = 0;
  double L = 0;
  DiscCount counts;
  std::string regime;
};

struct StatReport {
  int n = 0;
  double spacing = 0;
  std::vector<CountRow> counts;
  double vacuum_distance = 0;
  double psi6 = 0;
};

StatReport stat_report(const Configuration& cfg, const Potential& pot, const std::vector<double>& L_grid,
                       double s = 0.5);

struct SeparationRow {
  double c = 0;
  int n = 0;
  std::vector<double> spacings;  // one per seed
  double min = 0;
  double median = 0;
};

struct SeparationScan {
  std::vector<SeparationRow> rows;
  std::vector<double> c_values;
  std::vector<double> tail_min;     // per c, min over seeds and tail n
  std::vector<double> tail_median;  // per c
  double s0_prefactor = 0;          // fit of median ≈ m·e^{−3/(2c)}
};

SeparationScan separation_scan(const Potential& pot, const std::vector<double>& c_values,
                               const std::vector<int>& n_values, int seeds, int sweeps, std::uint64_t seed);

double median(std::vector<double> v);

}  // namespace cglab
