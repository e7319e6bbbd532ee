#include "cglab/limits.hpp"

#include <algorithm>

#include "cglab/quadrature.hpp"
#include "cglab/special.hpp"

namespace cglab {

RescaleMap make_rescale(Complex p, int n, double rho, double delta_q, double theta) {
  if (!(delta_q > 0)) throw ModelViolation("rescale: ΔQ(p) must be positive at the zoom point");
  if (n < 1 || !(rho > 0)) throw ConfigError("rescale: need n >= 1 and rho > 0");
  return {p, n, rho, delta_q, theta};
}

std::vector<Complex> rescale_points(const RescaleMap& map, const Configuration& cfg) {
  std::vector<Complex> out;
  out.reserve(cfg.points.size());
  for (Complex z : cfg.points) out.push_back(map.to_z(z));
  return out;
}

Complex RescaledKernel::operator()(Complex z, Complex w) const {
  double c = map_.n * map_.rho * map_.delta_q;
  return space_.kernel(map_.to_zeta(z), map_.to_zeta(w)) / c;
}

double RescaledKernel::one_point(Complex z) const {
  return space_.one_point(map_.to_zeta(z)) / (map_.n * map_.rho * map_.delta_q);
}

RescaledKernel rescale_kernel(const RescaleMap& map, const WeightedPolySpace& space) {
  if (!(map.delta_q > 0)) throw ModelViolation("rescale: ΔQ(p) must be positive at the zoom point");
  return RescaledKernel(map, space);
}

namespace {

LogComplex F_right(Complex z) {
  // Re z >= 0: F = ½ e^{-u²} w(iu), u = z/√2
  Complex u = z / std::sqrt(2.0);
  Complex u2 = u * u;
  LogComplex w = faddeeva_log_upper(Complex(0, 1) * u);
  return {std::log(0.5) - u2.real() + w.log_abs, -u2.imag() + w.arg};
}

}  // namespace

LogComplex F_erfc_log(Complex z) {
  if (z.imag() == 0 && z.real() < 20) return to_log(Complex(0.5 * std::erfc(z.real() / std::sqrt(2.0)), 0));
  if (z.real() >= 0) return F_right(z);
  LogComplex g = F_right(-z);
  if (g.log_abs > 40) return {g.log_abs, g.arg + kPi};
  return to_log(1.0 - g.value());
}

Complex F_erfc(Complex z) { return F_erfc_log(z).value(); }

double dawson(double x) { return 0.5 * std::sqrt(kPi) * faddeeva(Complex(x, 0)).imag(); }

Complex ginibre_G(Complex z, Complex w) {
  return std::exp(z * std::conj(w) - 0.5 * std::norm(z) - 0.5 * std::norm(w));
}

LogComplex boundary_K_log(double l, Complex z, Complex w) {
  Complex e = z * std::conj(w) - 0.5 * std::norm(z) - 0.5 * std::norm(w);
  LogComplex f = F_erfc_log(z + std::conj(w) + 2 * l);
  return {e.real() + f.log_abs, e.imag() + f.arg};
}

Complex boundary_K(double l, Complex z, Complex w) { return boundary_K_log(l, z, w).value(); }

Complex LimitKernel::operator()(Complex z, Complex w) const {
  return kind == Kind::Ginibre ? ginibre_G(z, w) : boundary_K(l, z, w);
}

DecayResult verify_decay(std::optional<double> l, std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  DecayResult res;
  double best = -std::numeric_limits<double>::infinity();
  auto draw = [&] { return std::polar(30 * std::sqrt(rng.uniform()), 2 * kPi * rng.uniform()); };
  for (std::size_t i = 0; i < samples; ++i) {
    Complex z = draw(), w = draw();
    double li = l ? *l : -10 + 20 * rng.uniform();
    LogComplex k = boundary_K_log(li, z, w);
    Complex d = z - w;
    double lc = k.log_abs + 0.5 * d.real() * d.real() + std::log1p(std::abs(d.imag()));
    best = std::max(best, lc);
  }
  res.samples = samples;
  res.max_c = std::exp(best);
  res.passed = std::isfinite(res.max_c) && res.max_c <= 10;
  return res;
}

double Region::area() const {
  switch (kind) {
    case Kind::Disc: return size * size;
    case Kind::Square: return size * size / kPi;
    case Kind::Strip: return 2 * size * height / kPi;
  }
  return 0;
}

double Region::perimeter() const {
  switch (kind) {
    case Kind::Disc: return 2 * size;
    case Kind::Square: return 4 * size / kPi;
    case Kind::Strip: return (2 * size + 4 * height) / kPi;
  }
  return 0;
}

namespace {

struct ChordRegion {
  Region r;
  double xmax() const { return r.kind == Region::Kind::Disc ? r.size : 0.5 * r.size; }
  double half_chord(double x) const {
    if (std::abs(x) >= xmax()) return 0;
    switch (r.kind) {
      case Region::Kind::Disc: return std::sqrt(std::max(0.0, r.size * r.size - x * x));
      case Region::Kind::Square: return 0.5 * r.size;
      case Region::Kind::Strip: return r.height;
    }
    return 0;
  }
};

// nodes on [a,b] in x; sine substitution for disc chords to absorb the square-root ends
LineRule x_rule(const ChordRegion& E, double a, double b, double width) {
  LineRule out;
  if (b <= a) return out;
  double X = E.xmax();
  bool inside = a >= -X - 1e-15 && b <= X + 1e-15;
  if (E.r.kind == Region::Kind::Disc && inside) {
    double ta = std::asin(std::clamp(a / X, -1.0, 1.0)), tb = std::asin(std::clamp(b / X, -1.0, 1.0));
    int panels = std::max(1, int(std::ceil((b - a) / width)));
    LineRule t = composite_gauss(ta, tb, panels, 10);
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      out.nodes.push_back(X * std::sin(t.nodes[i]));
      out.weights.push_back(t.weights[i] * X * std::cos(t.nodes[i]));
    }
    return out;
  }
  return composite_gauss_width(a, b, width, 10);
}

double sq_F(const LimitKernel& k, double s, double u) {
  if (k.kind == LimitKernel::Kind::Ginibre) return 1.0;
  LogComplex f = F_erfc_log(Complex(s + 2 * k.l, u));
  return std::exp(2 * f.log_abs);
}

// ∫ e^{-u²} |F(s + iu)|² λ(u) du
double u_integral(const LimitKernel& k, double s, double c1, double c2, double width) {
  auto lam = [&](double u) {
    double ov = std::max(0.0, std::min(c1, c2 + u) - std::max(-c1, -c2 + u));
    return 2 * c1 - ov;
  };
  double U0 = std::max(8.0, c1 + c2 + 1);
  std::vector<double> cuts = {-U0, U0};
  if (c2 > 0)
    for (double v : {c1 - c2, -(c1 - c2), c1 + c2, -(c1 + c2)}) cuts.push_back(v);
  std::sort(cuts.begin(), cuts.end());
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    if (b - a < 1e-14) continue;
    // e^{-u²} is negligible beyond |u| = 8 for the Ginibre kernel
    if (k.kind == LimitKernel::Kind::Ginibre) {
      a = std::max(a, -8.0);
      b = std::min(b, 8.0);
      if (b <= a) continue;
    }
    LineRule g = composite_gauss_width(a, b, width, 10);
    for (std::size_t j = 0; j < g.nodes.size(); ++j) {
      double u = g.nodes[j];
      double lm = lam(u);
      if (lm == 0) continue;
      total += g.weights[j] * std::exp(-u * u) * sq_F(k, s, u) * lm;
    }
  }
  if (k.kind == LimitKernel::Kind::Boundary) {
    // algebraic tails: u = ±U0/t, t in (0, 1]
    LineRule t = gauss_legendre(0, 1, 20);
    for (std::size_t j = 0; j < t.nodes.size(); ++j) {
      double u = U0 / t.nodes[j];
      double jac = U0 / (t.nodes[j] * t.nodes[j]);
      for (double sg : {-1.0, 1.0}) {
        LogComplex f = F_erfc_log(Complex(s + 2 * k.l, sg * u));
        double v = std::exp(2 * f.log_abs - u * u);
        total += t.weights[j] * jac * v * 2 * c1;
      }
    }
  }
  return total;
}

}  // namespace

AreaLaw area_law(const LimitKernel& kernel, const Region& region, double accuracy) {
  if (!(region.size > 0) || (region.kind == Region::Kind::Strip && !(region.height > 0)))
    throw ConfigError("area_law: region must have positive size");
  ChordRegion E{region};
  const double width = 1.0 / accuracy;
  const double T = 6.0;  // e^{-36} cut-off of the Gaussian factor
  const double X = E.xmax();
  LineRule x1s = x_rule(E, -X, X, width);
  double flux = 0;
  for (std::size_t i = 0; i < x1s.nodes.size(); ++i) {
    double x1 = x1s.nodes[i];
    double c1 = E.half_chord(x1);
    if (c1 == 0) continue;
    double inner = 0;
    double lo = x1 - T, hi = x1 + T;
    const double pieces[3][2] = {{lo, std::min(hi, -X)}, {std::max(lo, -X), std::min(hi, X)}, {std::max(lo, X), hi}};
    for (const auto& pc : pieces) {
      if (pc[1] <= pc[0]) continue;
      LineRule x2s = x_rule(E, pc[0], pc[1], width);
      for (std::size_t j = 0; j < x2s.nodes.size(); ++j) {
        double x2 = x2s.nodes[j];
        double c2 = E.half_chord(x2);
        double dx = x1 - x2;
        // |F(s+iu)|² e^{-u²} <= e^{-s²} once s + 2l > 0; beyond 6.5 it is below 1e-18
        if (kernel.kind == LimitKernel::Kind::Boundary && x1 + x2 + 2 * kernel.l > 6.5) continue;
        inner += x2s.weights[j] * std::exp(-dx * dx) * u_integral(kernel, x1 + x2, c1, c2, width);
      }
    }
    flux += x1s.weights[i] * inner;
  }
  flux /= kPi * kPi;
  if (!std::isfinite(flux)) throw NumericalError("area_law: non-convergent truncation");
  AreaLaw out;
  out.flux = flux;
  out.perim = region.perimeter();
  out.ratio = flux / out.perim;
  out.log_ratio = flux / (out.perim * (1 + std::max(0.0, std::log(region.area() / out.perim))));
  return out;
}

Profile boundary_profile(const WeightedPolySpace& space, const Droplet& s, double l, int window, double theta,
                         double half_width) {
  if (s.kind() == DropletKind::Empirical)
    throw UnsupportedError("boundary_profile: empirical droplets have no smooth boundary parametrization");
  if (window < 2) throw ConfigError("boundary_profile: window must be >= 2");
  const int n = space.order();
  Complex q = s.boundary_point(theta);
  double nt = s.normal_angle(theta);
  double dq = space.potential().lap(q);
  if (!(dq > 0)) throw ModelViolation("boundary_profile: ΔQ vanishes at the boundary point");
  Complex e = std::polar(1.0, nt);
  double sc = std::sqrt(n * dq);
  Complex p = q + l * e / sc;
  Profile prof;
  for (int i = 0; i < window; ++i) {
    double x = -half_width + 2 * half_width * i / (window - 1);
    ProfileRow row;
    row.x = x;
    row.rescaled = space.one_point(p + x * e / sc) / (n * dq);
    row.limit = F_erfc(Complex(2 * x + 2 * l, 0)).real();
    prof.max_deviation = std::max(prof.max_deviation, std::abs(row.rescaled - row.limit));
    prof.rows.push_back(row);
  }
  return prof;
}

}  // namespace cglab
