#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cglab/common.hpp"

namespace cglab {

enum class PotentialKind { RadialMonomial, RadialMonomialPlusHarmonic, Custom };

struct PotentialValue {
  double q = 0;
  double gx = 0, gy = 0;
  double lap = 0;  // quarter Laplacian
};

struct CustomFunctions {
  std::function<double(Complex)> q;
  std::function<Complex(Complex)> grad;  // (dQ/dx, dQ/dy) packed as x + iy
  std::function<double(Complex)> lap;
};

// reference configuration used for empirical droplets
struct Reference {
  std::vector<Complex> points;
  double margin = 1.0;  // M, dilation is M/sqrt(n)
};

class Potential {
 public:
  static Potential radial(int p);
  static Potential radial_harmonic(int p, double t, int d);
  static Potential custom(CustomFunctions fns, std::string name = "custom");

  Potential with_reference(Reference ref) const;

  PotentialKind kind() const { return kind_; }
  int p() const { return p_; }
  double t() const { return t_; }
  int d() const { return d_; }
  bool is_radial() const { return kind_ == PotentialKind::RadialMonomial; }
  const std::optional<Reference>& reference() const { return ref_; }
  std::string name() const;

  double q(Complex z) const;
  double lap(Complex z) const;
  Complex grad(Complex z) const;
  PotentialValue eval(Complex z) const;

  // |ζ|^{2p} part only; 0 for custom
  double radial_part(Complex z) const;
  // radius of the droplet of the radial part, R = p^{-1/(2p)}
  double radial_droplet_radius() const;
  // max of ΔQ over D(0, r), sampled for custom kinds
  double max_lap(double r) const;

 private:
  PotentialKind kind_ = PotentialKind::RadialMonomial;
  int p_ = 1;
  double t_ = 0;
  int d_ = 1;
  CustomFunctions fns_;
  std::string name_;
  std::optional<Reference> ref_;
};

enum class DropletKind { Disc, Annulus, Empirical };

class Droplet {
 public:
  static Droplet disc(double radius);
  static Droplet annulus(double r_in, double r_out);
  // convex hull of the points, dilated by margin
  static Droplet empirical(const std::vector<Complex>& points, double margin);

  DropletKind kind() const { return kind_; }
  double radius() const { return r_out_; }
  double r_in() const { return r_in_; }
  double r_out() const { return r_out_; }
  const std::vector<Complex>& hull() const { return hull_; }
  double margin() const { return margin_; }

  double delta(Complex z) const;
  bool contains(Complex z) const { return delta(z) == 0.0; }
  // outer boundary point in direction theta and its outward normal angle
  Complex boundary_point(double theta) const;
  double normal_angle(double theta) const;
  // radius of a centered disc containing S
  double extent() const;
  double area() const;  // normalized, dxdy/pi
  // bounding box (xmin, ymin) + i... as two corners
  std::pair<Complex, Complex> bounding_box() const;

 private:
  DropletKind kind_ = DropletKind::Disc;
  double r_in_ = 0, r_out_ = 1;
  std::vector<Complex> hull_;
  double margin_ = 0;
};

Droplet droplet(const Potential& pot);

struct Vicinity {
  bool inside = false;
  double delta = 0;
};

Vicinity vicinity(const Droplet& s, Complex z, double M, int n);

double equilibrium_density(const Potential& pot, const Droplet& s, Complex z);

std::vector<Complex> convex_hull(std::vector<Complex> pts);

}  // namespace cglab
