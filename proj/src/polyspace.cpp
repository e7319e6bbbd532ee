#include "cglab/polyspace.hpp"

#include <algorithm>
#include <mutex>

namespace cglab {

struct SpaceData {
  Potential pot;
  int m = 0;
  bool radial = false;
  int p = 1;
  std::vector<double> log_h;  // radial norms
  double cond = 1;
  double gram_dev = 0;
  double r_cut = 0;

  // non-radial: one Arnoldi recurrence per residue class of k mod d
  int d = 1;
  struct Block {
    int r = 0;
    int size = 0;
    double c0 = 1;
    Eigen::MatrixXcd h;  // (size) x (size-1), h(i, j) for i <= j+1
  };
  std::vector<Block> blocks;

  std::once_flag once;
  PlaneRule rule;
};

namespace {

double half_q(const SpaceData& s, Complex z) { return 0.5 * s.m * s.pot.q(z); }

PlaneRule radial_rule(const SpaceData& s) {
  int m = s.m;
  double k = m - 1;
  double rs = std::pow((2 * k + 1) / (2.0 * s.p * m), 1.0 / (2 * s.p));
  double g2 = (2 * k + 1) / (rs * rs) + 2.0 * s.p * (2 * s.p - 1) * m * std::pow(rs, 2 * s.p - 2);
  double w = 1 / std::sqrt(g2);
  double width = std::min(1 / std::sqrt(double(m)), 2 * w);
  int panels = std::max(1, int(std::ceil(s.r_cut / width)));
  return disc_rule(0, s.r_cut, panels, 10, 4 * m + 16);
}

void radial_basis(const SpaceData& s, Complex z, Complex* out) {
  double r = std::abs(z);
  double wq = half_q(s, z);
  if (r == 0) {
    out[0] = std::exp(-wq - 0.5 * s.log_h[0]);
    for (int k = 1; k < s.m; ++k) out[k] = 0;
    return;
  }
  double lr = std::log(r);
  Complex ph = z / r, e = 1;
  for (int k = 0; k < s.m; ++k) {
    out[k] = std::exp(k * lr - wq - 0.5 * s.log_h[k]) * e;
    e *= ph;
  }
}

// recurrence for one block on a single point; returns stored values and common log-scale
void block_eval(const SpaceData::Block& b, int d, Complex z, std::vector<Complex>& p, double& scale) {
  p.assign(b.size, 0);
  scale = 0;
  if (b.size == 0) return;
  Complex zd = std::pow(z, d);
  p[0] = (b.r == 0 ? Complex(1, 0) : std::pow(z, b.r)) / b.c0;
  for (int j = 0; j + 1 < b.size; ++j) {
    Complex v = zd * p[j];
    for (int i = 0; i <= j; ++i) v -= b.h(i, j) * p[i];
    v /= b.h(j + 1, j);
    p[j + 1] = v;
    if (std::abs(v) > 1e100) {
      for (int i = 0; i <= j + 1; ++i) p[i] *= 1e-100;
      scale += 100 * std::log(10.0);
    }
  }
}

void arnoldi_basis(const SpaceData& s, Complex z, Complex* out) {
  double wq = half_q(s, z);
  std::vector<Complex> p;
  for (const auto& b : s.blocks) {
    double scale;
    block_eval(b, s.d, z, p, scale);
    double f = scale - wq;
    for (int j = 0; j < b.size; ++j) {
      Complex v = p[j];
      double a = std::abs(v);
      out[b.r + s.d * j] = (a == 0) ? Complex(0, 0) : std::exp(std::log(a) + f) * (v / a);
    }
  }
}

void build_arnoldi(SpaceData& s) {
  const int m = s.m;
  s.d = s.pot.kind() == PotentialKind::RadialMonomialPlusHarmonic ? s.pot.d() : 1;
  const int d = s.d;
  double rp = s.pot.radial_droplet_radius();
  double r_cut = std::max(1.25 * rp, rp + 8 / std::sqrt(double(m)));
  int p = s.pot.kind() == PotentialKind::Custom ? 1 : s.pot.p();

  for (int attempt = 0; attempt < 10; ++attempt, r_cut *= 1.2) {
    s.r_cut = r_cut;
    s.cond = 1;
    s.gram_dev = 0;
    s.blocks.clear();
    // sector nodes: trapezoid over [0, 2π/d), weights scaled by d
    int n_ang = ((4 * m + 16 + d - 1) / d) * d;
    int sector = n_ang / d;
    LineRule rad = composite_gauss_width(0, r_cut, 1 / (p * std::sqrt(double(m))), 10);
    std::vector<Complex> nodes;
    std::vector<double> w;
    for (int a = 0; a < sector; ++a) {
      Complex u = std::polar(1.0, 2 * kPi * a / n_ang);
      for (std::size_t i = 0; i < rad.nodes.size(); ++i) {
        nodes.push_back(rad.nodes[i] * u);
        w.push_back(2.0 * rad.weights[i] * rad.nodes[i] * d / n_ang);
      }
    }
    const Eigen::Index N = static_cast<Eigen::Index>(nodes.size());
    Eigen::VectorXd W(N);
    Eigen::VectorXcd zd(N), weight(N);
    for (Eigen::Index i = 0; i < N; ++i) {
      W(i) = w[i];
      zd(i) = std::pow(nodes[i], d);
      weight(i) = std::exp(-half_q(s, nodes[i]));
    }
    for (int r = 0; r < d && r < m; ++r) {
      SpaceData::Block b;
      b.r = r;
      b.size = (m - 1 - r) / d + 1;
      b.h = Eigen::MatrixXcd::Zero(b.size, std::max(b.size - 1, 1));
      Eigen::MatrixXcd V(N, b.size);
      Eigen::VectorXcd v0(N);
      for (Eigen::Index i = 0; i < N; ++i) v0(i) = (r == 0 ? Complex(1, 0) : std::pow(nodes[i], r)) * weight(i);
      double c0 = std::sqrt((v0.cwiseAbs2().cwiseProduct(W)).sum());
      if (!(c0 > 0) || !std::isfinite(c0))
        throw NumericalError("build_space: degenerate start vector for m=" + std::to_string(m) + ", " +
                             s.pot.name());
      b.c0 = c0;
      V.col(0) = v0 / c0;
      for (int j = 0; j + 1 < b.size; ++j) {
        Eigen::VectorXcd u = zd.cwiseProduct(V.col(j));
        double nu = std::sqrt((u.cwiseAbs2().cwiseProduct(W)).sum());
        auto Vj = V.leftCols(j + 1);
        Eigen::VectorXcd wu = u.cwiseProduct(W.cast<Complex>());
        Eigen::VectorXcd hc = Vj.adjoint() * wu;
        u -= Vj * hc;
        wu = u.cwiseProduct(W.cast<Complex>());
        Eigen::VectorXcd hc2 = Vj.adjoint() * wu;
        u -= Vj * hc2;
        hc += hc2;
        double hn = std::sqrt((u.cwiseAbs2().cwiseProduct(W)).sum());
        if (!(hn > 0))
          throw NumericalError("build_space: Arnoldi breakdown for m=" + std::to_string(m) + ", " +
                               s.pot.name());
        for (int i = 0; i <= j; ++i) b.h(i, j) = hc(i);
        b.h(j + 1, j) = hn;
        s.cond = std::max(s.cond, nu / hn);
        V.col(j + 1) = u / hn;
      }
      Eigen::MatrixXcd G = V.adjoint() * (W.cast<Complex>().asDiagonal() * V);
      G -= Eigen::MatrixXcd::Identity(b.size, b.size);
      s.gram_dev = std::max(s.gram_dev, G.cwiseAbs().maxCoeff());
      s.blocks.push_back(std::move(b));
    }
    if (s.cond > 1e12)
      throw NumericalError("build_space: condition estimate " + std::to_string(s.cond) + " exceeds 1e12 for m=" +
                           std::to_string(m) + ", " + s.pot.name());
    if (s.gram_dev > 1e-8)
      throw NumericalError("build_space: Gram deviation " + std::to_string(s.gram_dev) + " for m=" +
                           std::to_string(m) + ", " + s.pot.name());
    // tail capture on the cut circle
    double tail = 0;
    std::vector<Complex> vals(m);
    for (int a = 0; a < 4 * m + 16; ++a) {
      arnoldi_basis(s, std::polar(r_cut, 2 * kPi * a / (4 * m + 16)), vals.data());
      for (Complex v : vals) tail = std::max(tail, std::abs(v));
    }
    if (tail < 1e-12) {
      s.rule.nodes.clear();
      s.rule.weights.clear();
      // full-circle rule for later integrals
      int n_full = 4 * m + 16;
      LineRule rr = composite_gauss_width(0, r_cut, 1 / (p * std::sqrt(double(m))), 10);
      for (int a = 0; a < n_full; ++a) {
        Complex u = std::polar(1.0, 2 * kPi * a / n_full);
        for (std::size_t i = 0; i < rr.nodes.size(); ++i) {
          s.rule.nodes.push_back(rr.nodes[i] * u);
          s.rule.weights.push_back(2.0 * rr.weights[i] * rr.nodes[i] / n_full);
        }
      }
      return;
    }
  }
  throw NumericalError("build_space: tail capture failed for m=" + std::to_string(m) + ", " + s.pot.name());
}

}  // namespace

double radial_log_norm(int k, double m, int p) {
  // h_k = 2 ∫ r^{2k+1} e^{-m r^{2p}} dr; integrand exp(g), g = (2k+1) log r - m r^{2p}
  double a = 2 * k + 1;
  double rs = std::pow(a / (2.0 * p * m), 1.0 / (2 * p));
  double g2 = a / (rs * rs) + 2.0 * p * (2 * p - 1) * m * std::pow(rs, 2 * p - 2);
  double w = 1 / std::sqrt(g2);
  double gs = a * std::log(rs) - m * std::pow(rs, 2 * p);
  double lo = std::max(0.0, rs - 40 * w), hi = rs + 40 * w;
  LineRule g = composite_gauss_width(lo, hi, w, 20);
  double sum = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    double r = g.nodes[i];
    sum += g.weights[i] * std::exp(a * std::log(r) - m * std::pow(r, 2 * p) - gs);
  }
  return gs + std::log(2 * sum);
}

WeightedPolySpace WeightedPolySpace::build(const Potential& pot, int m) {
  if (m < 1) throw ConfigError("build_space: m must be >= 1");
  WeightedPolySpace sp;
  sp.d_ = std::make_shared<SpaceData>();
  SpaceData& s = *sp.d_;
  s.pot = pot;
  s.m = m;
  s.radial = pot.is_radial();
  if (s.radial) {
    s.p = pot.p();
    s.log_h.resize(m);
    for (int k = 0; k < m; ++k) s.log_h[k] = radial_log_norm(k, m, s.p);
    double k = m - 1;
    double rs = std::pow((2 * k + 1) / (2.0 * s.p * m), 1.0 / (2 * s.p));
    double g2 = (2 * k + 1) / (rs * rs) + 2.0 * s.p * (2 * s.p - 1) * m * std::pow(rs, 2 * s.p - 2);
    s.r_cut = rs + 12 / std::sqrt(g2);
  } else {
    build_arnoldi(s);
    std::call_once(s.once, [] {});
  }
  return sp;
}

int WeightedPolySpace::order() const { return d_->m; }
const Potential& WeightedPolySpace::potential() const { return d_->pot; }
double WeightedPolySpace::condition_estimate() const { return d_->cond; }
double WeightedPolySpace::gram_deviation() const { return d_->gram_dev; }
double WeightedPolySpace::cut_radius() const { return d_->r_cut; }

const PlaneRule& WeightedPolySpace::quadrature() const {
  std::call_once(d_->once, [this] { d_->rule = radial_rule(*d_); });
  return d_->rule;
}

double WeightedPolySpace::log_monomial_norm(int k) const {
  if (!d_->radial) throw UnsupportedError("monomial norms are only exact for radial potentials");
  return d_->log_h.at(k);
}

void WeightedPolySpace::basis_into(Complex z, Complex* out) const {
  if (d_->radial) radial_basis(*d_, z, out);
  else arnoldi_basis(*d_, z, out);
}

std::vector<Complex> WeightedPolySpace::basis(Complex z) const {
  std::vector<Complex> v(d_->m);
  basis_into(z, v.data());
  return v;
}

Eigen::MatrixXcd WeightedPolySpace::basis_matrix(const std::vector<Complex>& pts) const {
  Eigen::MatrixXcd B(static_cast<Eigen::Index>(pts.size()), d_->m);
  std::vector<Complex> row(d_->m);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    basis_into(pts[i], row.data());
    for (int k = 0; k < d_->m; ++k) B(static_cast<Eigen::Index>(i), k) = row[k];
  }
  return B;
}

Complex WeightedPolySpace::kernel(Complex z, Complex w) const {
  const SpaceData& s = *d_;
  if (s.radial) {
    double rz = std::abs(z), rw = std::abs(w);
    double base = -half_q(s, z) - half_q(s, w);
    if (rz == 0 || rw == 0) return std::exp(base - s.log_h[0]);
    double l = std::log(rz) + std::log(rw);
    double mx = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < s.m; ++k) mx = std::max(mx, k * l - s.log_h[k]);
    Complex ph = (z / rz) * std::conj(w / rw), e = 1, sum = 0;
    for (int k = 0; k < s.m; ++k) {
      sum += std::exp(k * l - s.log_h[k] - mx) * e;
      e *= ph;
    }
    return sum * std::exp(mx + base);
  }
  std::vector<Complex> a(s.m), b(s.m);
  basis_into(z, a.data());
  basis_into(w, b.data());
  Complex sum = 0;
  for (int k = 0; k < s.m; ++k) sum += a[k] * std::conj(b[k]);
  return sum;
}

double WeightedPolySpace::one_point(Complex z) const {
  const SpaceData& s = *d_;
  if (s.radial) {
    double r = std::abs(z);
    double base = -2 * half_q(s, z);
    if (r == 0) return std::exp(base - s.log_h[0]);
    double l = 2 * std::log(r);
    double mx = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < s.m; ++k) mx = std::max(mx, k * l - s.log_h[k]);
    double sum = 0;
    for (int k = 0; k < s.m; ++k) sum += std::exp(k * l - s.log_h[k] - mx);
    return sum * std::exp(mx + base);
  }
  std::vector<Complex> a(s.m);
  basis_into(z, a.data());
  double sum = 0;
  for (Complex v : a) sum += std::norm(v);
  return sum;
}

double WeightedPolySpace::berezin(Complex z, Complex w) const {
  double r = one_point(z);
  if (!(r > 1e-300)) throw NumericalError("berezin: K(z,z) vanishes numerically");
  return std::norm(kernel(z, w)) / r;
}

Complex WeightedPolySpace::eval(const Eigen::VectorXcd& coeffs, Complex z) const {
  std::vector<Complex> a(d_->m);
  basis_into(z, a.data());
  Complex s = 0;
  for (int k = 0; k < d_->m; ++k) s += coeffs(k) * a[k];
  return s;
}

LagrangeBasis::LagrangeBasis(const Configuration& cfg, const Potential& pot)
    : z_(cfg.points), n_(double(cfg.points.size())), pot_(pot) {
  const std::size_t n = z_.size();
  log_den_.assign(n, 0);
  arg_den_.assign(n, 0);
  q_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    q_[j] = pot.q(z_[j]);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      Complex dz = z_[j] - z_[k];
      if (dz == Complex(0, 0)) throw ConfigError("lagrange: coincident nodes");
      log_den_[j] += std::log(std::abs(dz));
      arg_den_[j] += std::arg(dz);
    }
  }
}

void LagrangeBasis::values_into(Complex z, Complex* out) const {
  const std::size_t n = z_.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (z == z_[k]) {
      for (std::size_t j = 0; j < n; ++j) out[j] = j == k ? 1.0 : 0.0;
      return;
    }
  }
  double S = 0, P = 0;
  std::vector<double> la(n), ar(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex dz = z - z_[k];
    la[k] = std::log(std::abs(dz));
    ar[k] = std::arg(dz);
    S += la[k];
    P += ar[k];
  }
  double wq = 0.5 * n_ * pot_.q(z);
  for (std::size_t j = 0; j < n; ++j) {
    double l = S - la[j] - log_den_[j] - wq + 0.5 * n_ * q_[j];
    out[j] = std::polar(std::exp(l), P - ar[j] - arg_den_[j]);
  }
}

void LagrangeBasis::log_abs_into(Complex z, double* out) const {
  const std::size_t n = z_.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (z == z_[k]) {
      for (std::size_t j = 0; j < n; ++j)
        out[j] = j == k ? 0.0 : -std::numeric_limits<double>::infinity();
      return;
    }
  }
  double S = 0;
  std::vector<double> la(n);
  for (std::size_t k = 0; k < n; ++k) {
    la[k] = std::log(std::abs(z - z_[k]));
    S += la[k];
  }
  double wq = 0.5 * n_ * pot_.q(z);
  for (std::size_t j = 0; j < n; ++j) out[j] = S - la[j] - log_den_[j] - wq + 0.5 * n_ * q_[j];
}

std::vector<Complex> LagrangeBasis::values(Complex z) const {
  std::vector<Complex> v(z_.size());
  values_into(z, v.data());
  return v;
}

std::vector<Complex> lagrange(const Configuration& cfg, const Potential& pot, Complex z) {
  return LagrangeBasis(cfg, pot).values(z);
}

std::vector<Complex> droplet_grid(const Droplet& s, double pitch) {
  auto [lo, hi] = s.bounding_box();
  std::vector<Complex> out;
  int nx = int(std::ceil((hi.real() - lo.real()) / pitch)) + 1;
  int ny = int(std::ceil((hi.imag() - lo.imag()) / pitch)) + 1;
  double hx = (hi.real() - lo.real()) / (nx - 1), hy = (hi.imag() - lo.imag()) / (ny - 1);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      Complex z(lo.real() + i * hx, lo.imag() + j * hy);
      if (s.contains(z)) out.push_back(z);
    }
  return out;
}

std::vector<double> sup_norms_lagrange(const Configuration& cfg, const Potential& pot, const Droplet& s,
                                       double pitch_factor) {
  LagrangeBasis lb(cfg, pot);
  const int n = cfg.n();
  std::vector<Complex> pts = droplet_grid(s, pitch_factor / std::sqrt(double(n)));
  pts.insert(pts.end(), cfg.points.begin(), cfg.points.end());
  std::vector<double> best(n, -std::numeric_limits<double>::infinity()), buf(n);
  for (Complex z : pts) {
    lb.log_abs_into(z, buf.data());
    for (int j = 0; j < n; ++j) best[j] = std::max(best[j], buf[j]);
  }
  for (double& b : best) b = std::exp(b);
  return best;
}

namespace {

Eigen::VectorXcd random_coeffs(int m, Rng& rng) {
  Eigen::VectorXcd c(m);
  for (int k = 0; k < m; ++k) c(k) = Complex(rng.normal(), rng.normal());
  return c;
}

Complex random_point_in(const Droplet& s, Rng& rng) {
  auto [lo, hi] = s.bounding_box();
  for (;;) {
    Complex z(lo.real() + rng.uniform() * (hi.real() - lo.real()),
              lo.imag() + rng.uniform() * (hi.imag() - lo.imag()));
    if (s.contains(z)) return z;
  }
}

Droplet test_droplet(const WeightedPolySpace& space) {
  const Potential& pot = space.potential();
  if (pot.is_radial() || pot.reference()) return droplet(pot);
  return Droplet::disc(pot.radial_droplet_radius());
}

}  // namespace

double pointwise_lp_constant(const WeightedPolySpace& space, const Eigen::VectorXcd& coeffs, Complex z0,
                             double p, double s) {
  const int m = space.order();
  double rad = s / std::sqrt(double(m));
  PlaneRule rule = disc_rule(z0, rad, 3, 10, 48);
  double integral = 0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    integral += rule.weights[i] * std::pow(std::abs(space.eval(coeffs, rule.nodes[i])), p);
  double f0 = std::pow(std::abs(space.eval(coeffs, z0)), p);
  return std::pow(f0 * s * s / (m * integral), 1.0 / p);
}

EstimateCheck verify_pointwise_lp(const WeightedPolySpace& space, double p, double s, int trials,
                                  std::uint64_t seed) {
  if (!(p > 0) || !(s > 0)) throw ConfigError("verify_pointwise_lp needs p > 0 and s > 0");
  Rng rng(seed);
  Droplet S = test_droplet(space);
  const int m = space.order();
  EstimateCheck out;
  out.holds = true;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd c = random_coeffs(m, rng);
    Complex z0 = random_point_in(S, rng);
    double M = space.potential().max_lap(std::abs(z0) + s / std::sqrt(double(m)));
    double bound = std::exp(M * s * s / 2) * 1.1;
    double C = pointwise_lp_constant(space, c, z0, p, s);
    out.implied_c = std::max(out.implied_c, C);
    out.bound = std::max(out.bound, bound);
    if (!(C <= bound)) out.holds = false;
    ++out.trials;
  }
  return out;
}

double bernstein_constant(const WeightedPolySpace& space, const Eigen::VectorXcd& coeffs, Complex z0) {
  const int m = space.order();
  double f0 = std::abs(space.eval(coeffs, z0));
  if (f0 <= 1e-10) return -1;
  double h = 1e-3 / std::sqrt(double(m));
  double gx = (std::abs(space.eval(coeffs, z0 + h)) - std::abs(space.eval(coeffs, z0 - h))) / (2 * h);
  double gy = (std::abs(space.eval(coeffs, z0 + Complex(0, h))) -
               std::abs(space.eval(coeffs, z0 - Complex(0, h)))) / (2 * h);
  double rad = 1 / std::sqrt(double(m));
  PlaneRule rule = disc_rule(z0, rad, 3, 10, 48);
  double integral = 0;
  for (std::size_t i = 0; i < rule.size(); ++i) integral += rule.weights[i] * std::abs(space.eval(coeffs, rule.nodes[i]));
  double avg = integral / (rad * rad);
  return std::hypot(gx, gy) / (std::sqrt(double(m)) * avg);
}

EstimateCheck verify_bernstein(const WeightedPolySpace& space, int trials, std::uint64_t seed) {
  Rng rng(seed);
  Droplet S = test_droplet(space);
  const int m = space.order();
  EstimateCheck out;
  out.holds = true;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd c = random_coeffs(m, rng);
    Complex z0 = random_point_in(S, rng);
    double C = bernstein_constant(space, c, z0);
    if (C < 0) continue;
    double M = space.potential().max_lap(std::abs(z0) + 1 / std::sqrt(double(m)));
    double bound = 4 * std::exp(M / 2) * 1.1;
    out.implied_c = std::max(out.implied_c, C);
    out.bound = std::max(out.bound, bound);
    if (!std::isfinite(C) || C > bound) out.holds = false;
    ++out.trials;
  }
  return out;
}

std::vector<double> lagrange_power_mass(const Configuration& cfg, const Potential& pot, double beta) {
  const int n = cfg.n();
  LagrangeBasis lb(cfg, pot);
  double rmax = pot.radial_droplet_radius();
  for (Complex z : cfg.points) rmax = std::max(rmax, std::abs(z));
  double scale = 1 / std::sqrt(beta * n);
  double R = rmax + 10 * scale;
  int panels = std::max(1, int(std::ceil(R / scale)));
  int ang = int(std::ceil(8 * beta * n)) + 32;
  PlaneRule rule = disc_rule(0, R, panels, 7, ang);
  std::vector<double> mass(n, 0), buf(n);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    lb.log_abs_into(rule.nodes[i], buf.data());
    for (int j = 0; j < n; ++j) mass[j] += rule.weights[i] * std::exp(2 * beta * buf[j]);
  }
  return mass;
}

ExactIdentityResult verify_exact_identity(const Potential& pot, int n, double beta, int chains, int sweeps,
                                          double u_radius, std::uint64_t seed, int thin) {
  if (n < 2 || n > 8) throw ConfigError("verify_exact_identity: n must be in [2, 8]");
  if (!(beta > 0) || beta > 4) throw ConfigError("verify_exact_identity: beta must be in (0, 4]");
  if (chains < 2) throw ConfigError("verify_exact_identity: need at least 2 chains");
  ExactIdentityResult res;
  res.target = u_radius * u_radius;
  std::vector<double> means;
  for (int c = 0; c < chains; ++c) {
    auto snaps = sample_gibbs_chain(pot, n, beta, sweeps, derive_seed(seed, c), thin);
    double acc = 0;
    int cnt = 0;
    for (const auto& cfg : snaps) {
      std::vector<double> mass = lagrange_power_mass(cfg, pot, beta);
      for (int j = 0; j < n; ++j) {
        acc += std::abs(cfg.points[j]) < u_radius ? mass[j] : 0.0;
        ++cnt;
      }
    }
    if (cnt == 0) throw ConfigError("verify_exact_identity: chain produced no snapshots");
    means.push_back(acc / cnt);
    res.samples += static_cast<int>(snaps.size());
  }
  double mu = 0;
  for (double v : means) mu += v;
  mu /= means.size();
  double var = 0;
  for (double v : means) var += (v - mu) * (v - mu);
  var /= (means.size() - 1);
  res.estimate = mu;
  res.std_error = std::sqrt(var / means.size());
  res.chains = chains;
  res.inconclusive = res.std_error > 0.25 * std::abs(mu);
  return res;
}

}  // namespace cglab
