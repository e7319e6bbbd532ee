#include "cglab/potential.hpp"

#include <algorithm>

namespace cglab {

Potential Potential::radial(int p) {
  if (p < 1) throw ConfigError("radial potential needs p >= 1");
  Potential v;
  v.kind_ = PotentialKind::RadialMonomial;
  v.p_ = p;
  return v;
}

Potential Potential::radial_harmonic(int p, double t, int d) {
  if (p < 1 || d < 1) throw ConfigError("radial+harmonic potential needs p >= 1 and d >= 1");
  // growth: |ζ|^{2p} must dominate t Re ζ^d along every ray
  if (d > 2 * p || (d == 2 * p && std::abs(t) >= 1))
    throw ConfigError("harmonic term violates the growth condition");
  Potential v;
  v.kind_ = PotentialKind::RadialMonomialPlusHarmonic;
  v.p_ = p;
  v.t_ = t;
  v.d_ = d;
  return v;
}

Potential Potential::custom(CustomFunctions fns, std::string name) {
  Potential v;
  v.kind_ = PotentialKind::Custom;
  v.fns_ = std::move(fns);
  v.name_ = std::move(name);
  return v;
}

Potential Potential::with_reference(Reference ref) const {
  if (ref.points.size() < 3) throw ConfigError("reference configuration needs at least 3 points");
  Potential v = *this;
  v.ref_ = std::move(ref);
  return v;
}

std::string Potential::name() const {
  switch (kind_) {
    case PotentialKind::RadialMonomial: return "radial(p=" + std::to_string(p_) + ")";
    case PotentialKind::RadialMonomialPlusHarmonic:
      return "radial_harmonic(p=" + std::to_string(p_) + ",t=" + std::to_string(t_) +
             ",d=" + std::to_string(d_) + ")";
    case PotentialKind::Custom: return name_;
  }
  return "";
}

double Potential::radial_part(Complex z) const {
  if (kind_ == PotentialKind::Custom) return 0.0;
  return std::pow(std::norm(z), p_);
}

double Potential::q(Complex z) const {
  switch (kind_) {
    case PotentialKind::RadialMonomial: return std::pow(std::norm(z), p_);
    case PotentialKind::RadialMonomialPlusHarmonic:
      return std::pow(std::norm(z), p_) - t_ * std::real(std::pow(z, d_));
    case PotentialKind::Custom:
      if (!fns_.q) throw ConfigError("custom potential is missing Q");
      return fns_.q(z);
  }
  return 0.0;
}

Complex Potential::grad(Complex z) const {
  if (kind_ == PotentialKind::Custom) {
    if (!fns_.grad) throw ConfigError("custom potential is missing its gradient");
    return fns_.grad(z);
  }
  double r2 = std::norm(z);
  Complex g = 2.0 * p_ * (p_ == 1 ? 1.0 : std::pow(r2, p_ - 1)) * z;
  if (kind_ == PotentialKind::RadialMonomialPlusHarmonic) {
    Complex zd1 = d_ == 1 ? Complex(1, 0) : std::pow(z, d_ - 1);
    g -= t_ * d_ * std::conj(zd1);
  }
  return g;
}

double Potential::lap(Complex z) const {
  if (kind_ == PotentialKind::Custom) {
    if (!fns_.lap) throw ConfigError("custom potential is missing its Laplacian");
    return fns_.lap(z);
  }
  return p_ == 1 ? 1.0 : double(p_) * p_ * std::pow(std::norm(z), p_ - 1);
}

PotentialValue Potential::eval(Complex z) const {
  if (kind_ == PotentialKind::Custom && (!fns_.q || !fns_.grad || !fns_.lap))
    throw ConfigError("custom potential needs Q, gradient and Laplacian callables");
  PotentialValue v;
  v.q = q(z);
  Complex g = grad(z);
  v.gx = g.real();
  v.gy = g.imag();
  v.lap = lap(z);
  return v;
}

double Potential::radial_droplet_radius() const {
  if (kind_ == PotentialKind::Custom) return 1.0;
  return std::pow(double(p_), -1.0 / (2.0 * p_));
}

double Potential::max_lap(double r) const {
  if (kind_ != PotentialKind::Custom) return lap(Complex(r, 0));
  double best = 0;
  for (int i = 0; i <= 40; ++i)
    for (int k = 0; k < 64; ++k) best = std::max(best, lap(std::polar(r * i / 40.0, 2 * kPi * k / 64)));
  return best;
}

std::vector<Complex> convex_hull(std::vector<Complex> pts) {
  auto less = [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  };
  std::sort(pts.begin(), pts.end(), less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](Complex o, Complex a, Complex b) {
    return (a - o).real() * (b - o).imag() - (a - o).imag() * (b - o).real();
  };
  std::vector<Complex> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;  // counter-clockwise
}

Droplet Droplet::disc(double radius) {
  if (!(radius > 0)) throw ConfigError("disc droplet needs a positive radius");
  Droplet s;
  s.kind_ = DropletKind::Disc;
  s.r_out_ = radius;
  return s;
}

Droplet Droplet::annulus(double r_in, double r_out) {
  if (!(r_in >= 0 && r_out > r_in)) throw ConfigError("annulus droplet needs 0 <= r_in < r_out");
  Droplet s;
  s.kind_ = DropletKind::Annulus;
  s.r_in_ = r_in;
  s.r_out_ = r_out;
  return s;
}

Droplet Droplet::empirical(const std::vector<Complex>& points, double margin) {
  Droplet s;
  s.kind_ = DropletKind::Empirical;
  s.hull_ = convex_hull(points);
  if (s.hull_.size() < 3) throw ConfigError("empirical droplet needs a non-degenerate point cloud");
  s.margin_ = margin;
  double r = 0;
  for (Complex h : s.hull_) r = std::max(r, std::abs(h));
  s.r_out_ = r + margin;
  return s;
}

namespace {

double segment_distance(Complex z, Complex a, Complex b) {
  Complex ab = b - a;
  double t = std::real((z - a) * std::conj(ab)) / std::norm(ab);
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (a + t * ab));
}

double hull_distance(const std::vector<Complex>& h, Complex z) {
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < h.size(); ++i) {
    Complex a = h[i], b = h[(i + 1) % h.size()];
    double cr = (b - a).real() * (z - a).imag() - (b - a).imag() * (z - a).real();
    if (cr < 0) inside = false;
    best = std::min(best, segment_distance(z, a, b));
  }
  return inside ? 0.0 : best;
}

}  // namespace

double Droplet::delta(Complex z) const {
  switch (kind_) {
    case DropletKind::Disc: return std::max(0.0, std::abs(z) - r_out_);
    case DropletKind::Annulus: {
      double r = std::abs(z);
      return std::max({0.0, r - r_out_, r_in_ - r});
    }
    case DropletKind::Empirical: return std::max(0.0, hull_distance(hull_, z) - margin_);
  }
  return 0.0;
}

Complex Droplet::boundary_point(double theta) const {
  if (kind_ != DropletKind::Empirical) return std::polar(r_out_, theta);
  Complex c = 0;
  for (Complex h : hull_) c += h;
  c /= double(hull_.size());
  Complex u = std::polar(1.0, theta);
  double lo = 0, hi = 2 * r_out_ + 1;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    double mid = 0.5 * (lo + hi);
    if (delta(c + mid * u) > 0) hi = mid;
    else lo = mid;
  }
  return c + lo * u;
}

double Droplet::normal_angle(double theta) const {
  if (kind_ != DropletKind::Empirical) return theta;
  Complex b = boundary_point(theta);
  double h = 1e-6;
  Complex probe = b + 1e-4 * std::polar(1.0, theta);
  double gx = (delta(probe + h) - delta(probe - h)) / (2 * h);
  double gy = (delta(probe + Complex(0, h)) - delta(probe - Complex(0, h))) / (2 * h);
  return std::atan2(gy, gx);
}

double Droplet::extent() const { return r_out_; }

double Droplet::area() const {
  switch (kind_) {
    case DropletKind::Disc: return r_out_ * r_out_;
    case DropletKind::Annulus: return r_out_ * r_out_ - r_in_ * r_in_;
    case DropletKind::Empirical: {
      // polygon area + margin strip + rounded corners
      double a = 0, per = 0;
      for (std::size_t i = 0; i < hull_.size(); ++i) {
        Complex p = hull_[i], q = hull_[(i + 1) % hull_.size()];
        a += p.real() * q.imag() - q.real() * p.imag();
        per += std::abs(q - p);
      }
      return (0.5 * a + per * margin_ + kPi * margin_ * margin_) / kPi;
    }
  }
  return 0.0;
}

std::pair<Complex, Complex> Droplet::bounding_box() const {
  if (kind_ != DropletKind::Empirical) return {Complex(-r_out_, -r_out_), Complex(r_out_, r_out_)};
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (Complex h : hull_) {
    x0 = std::min(x0, h.real());
    x1 = std::max(x1, h.real());
    y0 = std::min(y0, h.imag());
    y1 = std::max(y1, h.imag());
  }
  return {Complex(x0 - margin_, y0 - margin_), Complex(x1 + margin_, y1 + margin_)};
}

Droplet droplet(const Potential& pot) {
  if (pot.kind() == PotentialKind::RadialMonomial) return Droplet::disc(pot.radial_droplet_radius());
  if (pot.reference()) {
    const Reference& ref = *pot.reference();
    return Droplet::empirical(ref.points, ref.margin / std::sqrt(double(ref.points.size())));
  }
  throw UnsupportedError("no analytic droplet for " + pot.name() + " and no reference configuration");
}

Vicinity vicinity(const Droplet& s, Complex z, double M, int n) {
  if (M < 0 || n < 1) throw ConfigError("vicinity needs M >= 0 and n >= 1");
  double d = s.delta(z);
  return {d < M / std::sqrt(double(n)), d};
}

double equilibrium_density(const Potential& pot, const Droplet& s, Complex z) {
  if (!s.contains(z)) return 0.0;
  double l = pot.lap(z);
  if (l < 0) throw ModelViolation("negative Laplacian inside the droplet for " + pot.name());
  return l;
}

}  // namespace cglab
