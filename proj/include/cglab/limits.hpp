#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cglab/ensemble.hpp"
#include "cglab/polyspace.hpp"

namespace cglab {

// z = sqrt(n rho ΔQ(p)) (ζ - p) e^{-iθ}
struct RescaleMap {
  Complex p = 0;
  int n = 1;
  double rho = 1;
  double delta_q = 1;
  double theta = 0;

  double scale() const { return std::sqrt(n * rho * delta_q); }
  Complex to_z(Complex zeta) const { return scale() * (zeta - p) * std::polar(1.0, -theta); }
  Complex to_zeta(Complex z) const { return p + z * std::polar(1.0, theta) / scale(); }
};

RescaleMap make_rescale(Complex p, int n, double rho, double delta_q, double theta);
std::vector<Complex> rescale_points(const RescaleMap& map, const Configuration& cfg);

class RescaledKernel {
 public:
  RescaledKernel(RescaleMap map, WeightedPolySpace space) : map_(map), space_(std::move(space)) {}
  Complex operator()(Complex z, Complex w) const;
  double one_point(Complex z) const;

 private:
  RescaleMap map_;
  WeightedPolySpace space_;
};

RescaledKernel rescale_kernel(const RescaleMap& map, const WeightedPolySpace& space);

// F(z) = erfc(z/√2)/2
Complex F_erfc(Complex z);
LogComplex F_erfc_log(Complex z);
double dawson(double x);
Complex ginibre_G(Complex z, Complex w);
Complex boundary_K(double l, Complex z, Complex w);
LogComplex boundary_K_log(double l, Complex z, Complex w);

struct LimitKernel {
  enum class Kind { Ginibre, Boundary };
  Kind kind = Kind::Ginibre;
  double l = 0;

  static LimitKernel ginibre() { return {}; }
  static LimitKernel boundary(double l) { return {Kind::Boundary, l}; }
  Complex operator()(Complex z, Complex w) const;
};

struct DecayResult {
  double max_c = 0;
  std::size_t samples = 0;
  bool passed = false;  // max_c finite and <= 10
};

// implied C in |K_l(z,w)| <= C e^{-|Re(z-w)|²/2} / (1 + |Im(z-w)|), |z|,|w| <= 30;
// l fixed if given, otherwise drawn from [-10, 10]
DecayResult verify_decay(std::optional<double> l, std::size_t samples, std::uint64_t seed);

struct Region {
  enum class Kind { Disc, Square, Strip };
  Kind kind = Kind::Disc;
  double size = 1;    // radius, side, or strip width
  double height = 1;  // strip half-height
  static Region disc(double r) { return {Kind::Disc, r, 0}; }
  static Region square(double side) { return {Kind::Square, side, 0}; }
  static Region strip(double width, double half_height) { return {Kind::Strip, width, half_height}; }
  double area() const;       // normalized
  double perimeter() const;  // arclength / π
};

struct AreaLaw {
  double flux = 0;
  double perim = 0;
  double ratio = 0;      // flux / perim
  double log_ratio = 0;  // flux / (perim (1 + log⁺(|E|/perim)))
};

AreaLaw area_law(const LimitKernel& kernel, const Region& region, double accuracy = 1.0);

struct ProfileRow {
  double x = 0;
  double rescaled = 0;
  double limit = 0;
};

struct Profile {
  std::vector<ProfileRow> rows;
  double max_deviation = 0;
};

// cross-section through the boundary along the outward normal at angle theta
Profile boundary_profile(const WeightedPolySpace& space, const Droplet& s, double l, int window,
                         double theta = 0.0, double half_width = 4.0);

}  // namespace cglab
