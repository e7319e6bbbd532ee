#pragma once

#include <vector>

#include "cglab/common.hpp"

namespace cglab {

// planar rule; weights already carry the 1/pi of dA
struct PlaneRule {
  std::vector<Complex> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  void append(const PlaneRule& other);
  double total() const;
};

struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// orders 7, 10, 15, 20, 25, 30
LineRule gauss_legendre(double a, double b, int order);
LineRule composite_gauss(double a, double b, int panels, int order);
LineRule composite_gauss_width(double a, double b, double max_width, int order);

// polar: composite Gauss in r, periodic trapezoid in angle
PlaneRule disc_rule(Complex center, double radius, int radial_panels, int radial_order, int angular);
PlaneRule annulus_rule(Complex center, double r_in, double r_out, int radial_panels, int radial_order,
                       int angular);

// D(c1,r1) ∩ D(c2,r2), polar about an interior point. The angle range is cut at the
// two corners so every piece has a smooth boundary.
PlaneRule lens_rule(Complex c1, double r1, Complex c2, double r2, double radial_width,
                    double angular_nodes_per_radian);

}  // namespace cglab
