#include "cglab/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>

namespace cglab {

namespace {

template <unsigned N>
void unit_rule(std::vector<double>& x, std::vector<double>& w) {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& a = G::abscissa();
  const auto& b = G::weights();
  x.clear();
  w.clear();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      x.push_back(0.0);
      w.push_back(b[i]);
    } else {
      x.push_back(-a[i]);
      w.push_back(b[i]);
      x.push_back(a[i]);
      w.push_back(b[i]);
    }
  }
}

struct UnitRule {
  std::vector<double> x, w;
};

const UnitRule& cached_unit(int order) {
  static const auto make = [](int o) {
    UnitRule r;
    switch (o) {
      case 7: unit_rule<7>(r.x, r.w); break;
      case 10: unit_rule<10>(r.x, r.w); break;
      case 15: unit_rule<15>(r.x, r.w); break;
      case 20: unit_rule<20>(r.x, r.w); break;
      case 25: unit_rule<25>(r.x, r.w); break;
      case 30: unit_rule<30>(r.x, r.w); break;
      default: throw ConfigError("unsupported Gauss-Legendre order " + std::to_string(o));
    }
    return r;
  };
  static const UnitRule r7 = make(7), r10 = make(10), r15 = make(15), r20 = make(20), r25 = make(25),
                        r30 = make(30);
  switch (order) {
    case 7: return r7;
    case 10: return r10;
    case 15: return r15;
    case 20: return r20;
    case 25: return r25;
    case 30: return r30;
    default: throw ConfigError("unsupported Gauss-Legendre order " + std::to_string(order));
  }
}

// exit distance from o along direction u out of D(c, r); o assumed inside
double exit_distance(Complex o, Complex u, Complex c, double r) {
  Complex d = o - c;
  double b = std::real(d * std::conj(u));
  double cc = std::norm(d) - r * r;
  double disc = b * b - cc;
  return -b + std::sqrt(std::max(disc, 0.0));
}

void add_ray_fan(PlaneRule& out, Complex o, const LineRule& ang, Complex c1, double r1, Complex c2,
                 double r2, double radial_width) {
  for (std::size_t i = 0; i < ang.nodes.size(); ++i) {
    Complex u = std::polar(1.0, ang.nodes[i]);
    double rho = std::min(exit_distance(o, u, c1, r1), exit_distance(o, u, c2, r2));
    if (rho <= 0) continue;
    LineRule rad = composite_gauss_width(0.0, rho, radial_width, 10);
    for (std::size_t k = 0; k < rad.nodes.size(); ++k) {
      out.nodes.push_back(o + rad.nodes[k] * u);
      out.weights.push_back(ang.weights[i] * rad.weights[k] * rad.nodes[k] / kPi);
    }
  }
}

}  // namespace

void PlaneRule::append(const PlaneRule& other) {
  nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

double PlaneRule::total() const {
  double s = 0;
  for (double w : weights) s += w;
  return s;
}

LineRule gauss_legendre(double a, double b, int order) {
  const UnitRule& u = cached_unit(order);
  LineRule r;
  double h = 0.5 * (b - a), mid = 0.5 * (a + b);
  r.nodes.reserve(u.x.size());
  r.weights.reserve(u.x.size());
  for (std::size_t i = 0; i < u.x.size(); ++i) {
    r.nodes.push_back(mid + h * u.x[i]);
    r.weights.push_back(h * u.w[i]);
  }
  return r;
}

LineRule composite_gauss(double a, double b, int panels, int order) {
  if (panels < 1) throw ConfigError("composite_gauss: panels must be positive");
  LineRule r;
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    LineRule g = gauss_legendre(a + p * h, a + (p + 1) * h, order);
    r.nodes.insert(r.nodes.end(), g.nodes.begin(), g.nodes.end());
    r.weights.insert(r.weights.end(), g.weights.begin(), g.weights.end());
  }
  return r;
}

LineRule composite_gauss_width(double a, double b, double max_width, int order) {
  int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_width - 1e-12)));
  return composite_gauss(a, b, panels, order);
}

PlaneRule annulus_rule(Complex center, double r_in, double r_out, int radial_panels, int radial_order,
                       int angular) {
  if (r_out <= r_in || angular < 1) throw ConfigError("annulus_rule: bad radii or angular count");
  LineRule rad = composite_gauss(r_in, r_out, radial_panels, radial_order);
  PlaneRule out;
  out.nodes.reserve(rad.nodes.size() * angular);
  out.weights.reserve(rad.nodes.size() * angular);
  double dth = 2 * kPi / angular;
  for (int a = 0; a < angular; ++a) {
    Complex u = std::polar(1.0, a * dth);
    for (std::size_t k = 0; k < rad.nodes.size(); ++k) {
      out.nodes.push_back(center + rad.nodes[k] * u);
      out.weights.push_back(rad.weights[k] * rad.nodes[k] * dth / kPi);
    }
  }
  return out;
}

PlaneRule disc_rule(Complex center, double radius, int radial_panels, int radial_order, int angular) {
  return annulus_rule(center, 0.0, radius, radial_panels, radial_order, angular);
}

PlaneRule lens_rule(Complex c1, double r1, Complex c2, double r2, double radial_width,
                    double angular_nodes_per_radian) {
  PlaneRule out;
  Complex e = c2 - c1;
  double d = std::abs(e);
  Complex dir = d > 0 ? e / d : Complex(1, 0);
  double lo = std::max(-r1, d - r2), hi = std::min(r1, d + r2);
  if (hi <= lo) return out;
  Complex o = c1 + 0.5 * (lo + hi) * dir;

  std::vector<double> cuts;
  if (d > 0 && d < r1 + r2 && d > std::abs(r1 - r2)) {
    double a = (r1 * r1 - r2 * r2 + d * d) / (2 * d);
    double h = std::sqrt(std::max(r1 * r1 - a * a, 0.0));
    Complex base = c1 + a * dir;
    Complex perp = dir * Complex(0, 1);
    for (Complex pt : {base + h * perp, base - h * perp}) {
      double t = std::arg(pt - o);
      if (t < 0) t += 2 * kPi;
      cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());
  }

  if (cuts.size() < 2) {
    int n = std::max(16, static_cast<int>(std::ceil(2 * kPi * angular_nodes_per_radian)));
    LineRule ang;
    for (int i = 0; i < n; ++i) {
      ang.nodes.push_back(2 * kPi * i / n);
      ang.weights.push_back(2 * kPi / n);
    }
    add_ray_fan(out, o, ang, c1, r1, c2, r2, radial_width);
    return out;
  }
  double arcs[2][2] = {{cuts[0], cuts[1]}, {cuts[1], cuts[0] + 2 * kPi}};
  for (auto& arc : arcs) {
    double len = arc[1] - arc[0];
    int panels = std::max(1, static_cast<int>(std::ceil(len * angular_nodes_per_radian / 10.0)));
    LineRule ang = composite_gauss(arc[0], arc[1], panels, 10);
    add_ray_fan(out, o, ang, c1, r1, c2, r2, radial_width);
  }
  return out;
}

}  // namespace cglab
