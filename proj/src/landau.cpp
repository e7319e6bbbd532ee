#include "cglab/landau.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

namespace cglab {

namespace {

ConcentrationSpectrum spectrum_from_rule(const WeightedPolySpace& space, const PlaneRule& rule, const Omega& om,
                                         const ConcentrationOptions& opt) {
  const int m = space.order();
  ConcentrationSpectrum out;
  out.m = m;
  out.omega = om;
  out.nodes = rule.size();
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(m, m);
  if (rule.size() > 0) {
    Eigen::MatrixXcd B = space.basis_matrix(rule.nodes);
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), rule.size());
    Eigen::MatrixXcd WB = w.cast<Complex>().asDiagonal() * B;
    T.noalias() = B.adjoint() * WB;
    T = 0.5 * (T + T.adjoint()).eval();
    // trace identities evaluated through the kernel, not through T
    for (std::size_t i = 0; i < rule.size(); ++i) out.trace += rule.weights[i] * space.one_point(rule.nodes[i]);
    if (rule.size() <= opt.pointwise_limit) {
      out.pointwise_trace_sq = true;
      Eigen::MatrixXcd K = B * B.adjoint();
      double s = 0;
      for (Eigen::Index a = 0; a < K.rows(); ++a)
        for (Eigen::Index b = 0; b < K.cols(); ++b) s += w(a) * w(b) * std::norm(K(a, b));
      out.trace_sq = s;
    } else {
      out.trace_sq = T.cwiseAbs2().sum();
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("concentration: eigensolver failed");
  const auto& ev = es.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(out.eigenvalues.rbegin(), out.eigenvalues.rend());
  for (double l : out.eigenvalues) {
    if (l < -1e-10 || l > 1 + 1e-10)
      throw NumericalError("concentration: eigenvalue " + std::to_string(l) +
                           " outside [0,1], quadrature failure for m=" + std::to_string(m));
    out.eig_sum += l;
    out.eig_sq_sum += l * l;
  }
  return out;
}

}  // namespace

ConcentrationSpectrum concentration(const WeightedPolySpace& space, const Omega& omega,
                                    const ConcentrationOptions& opt) {
  const int m = space.order();
  double sm = std::sqrt(double(m));
  PlaneRule rule;
  if (omega.r1 > 0 && omega.r2 > 0) {
    double reach = std::min(omega.r1, std::abs(omega.c1 - omega.c2) + omega.r2);
    double density = std::max(8.0, opt.angular_factor * 2 * reach * sm);
    rule = lens_rule(omega.c1, omega.r1, omega.c2, omega.r2, opt.radial_width / sm, density);
  }
  return spectrum_from_rule(space, rule, omega, opt);
}

ConcentrationSpectrum concentration_whole(const WeightedPolySpace& space) {
  ConcentrationOptions opt;
  opt.pointwise_limit = 0;
  return spectrum_from_rule(space, space.quadrature(), Omega::disc(0, space.cut_radius()), opt);
}

CountCheck eig_count_check(const std::vector<double>& eigenvalues, double theta) {
  if (!(theta > 0 && theta < 1)) throw ConfigError("eig_count_check: theta must lie in (0,1)");
  CountCheck c;
  c.theta = theta;
  double tr = 0, tr2 = 0;
  for (double l : eigenvalues) {
    double v = std::clamp(l, 0.0, 1.0);
    tr += v;
    tr2 += v * v;
    if (v >= theta) ++c.count;
  }
  c.lhs = std::abs(c.count - tr);
  c.rhs = std::max(1 / theta, 1 / (1 - theta)) * (tr - tr2);
  // rounding slack only; the inequality is exact for λ in [0,1]
  c.holds = c.lhs <= c.rhs + 1e-12 * std::max<std::size_t>(eigenvalues.size(), 1);
  return c;
}

CountCheck eig_count_check(const ConcentrationSpectrum& spec, double theta) {
  return eig_count_check(spec.eigenvalues, theta);
}

std::vector<CountCheck> eig_count_grid(const ConcentrationSpectrum& spec) {
  std::vector<CountCheck> out;
  for (int i = 1; i <= 19; ++i) out.push_back(eig_count_check(spec, 0.05 * i));
  return out;
}

std::vector<TraceRow> trace_asymptotics(const Potential& pot, Complex p, Regime regime, double L, double rho,
                                        double M, const std::vector<int>& m_list) {
  if (!(L > 0) || !(rho > 0) || M < 0) throw ConfigError("trace_asymptotics: need L > 0, rho > 0, M >= 0");
  Droplet S = droplet(pot);
  if (S.kind() != DropletKind::Disc) throw UnsupportedError("trace_asymptotics: needs a disc droplet");
  std::vector<TraceRow> rows;
  for (int m : m_list) {
    TraceRow row;
    row.m = m;
    row.L = L;
    row.rho = rho;
    double exact = m * rho;
    row.order = std::max(1, int(std::lround(exact)));
    if (std::abs(exact - row.order) > 1e-9) row.note = "m*rho rounded to " + std::to_string(row.order);
    WeightedPolySpace space = WeightedPolySpace::build(pot, row.order);
    Omega om = Omega::lens(p, L / std::sqrt(double(m)), 0, S.radius() + M / std::sqrt(double(m)));
    ConcentrationSpectrum spec = concentration(space, om);
    row.trace = spec.trace;
    row.trace_sq = spec.trace_sq;
    double dq = pot.lap(p);
    double main = rho * dq * L * L * (regime == Regime::Bulk ? 1.0 : 0.5);
    row.ratio = spec.trace / main;
    row.residual_L = (spec.trace - spec.trace_sq) / L;
    row.residual_LlogL = L > 1 ? (spec.trace - spec.trace_sq) / (L * std::log(L)) : 0.0;
    row.bound_residual = -std::numeric_limits<double>::infinity();
    for (const auto& c : eig_count_grid(spec)) row.bound_residual = std::max(row.bound_residual, c.lhs - c.rhs);
    rows.push_back(row);
  }
  return rows;
}

namespace {

int rounded_order(int n, double rho, std::string& note) {
  double exact = n * rho;
  int k = std::max(1, int(std::lround(exact)));
  if (std::abs(exact - k) > 1e-9) note = "n*rho rounded to " + std::to_string(k);
  return k;
}

}  // namespace

SamplingReport mz_constant(const Configuration& cfg, const Potential& pot, double rho, double M) {
  if (!(rho > 0 && rho < 1)) throw ConfigError("mz_constant: rho must lie in (0,1)");
  const int n = cfg.n();
  SamplingReport rep;
  rep.order = rounded_order(n, rho, rep.note);
  WeightedPolySpace space = WeightedPolySpace::build(pot, rep.order);
  Droplet S = droplet(pot);
  double reach = 2 * M / std::sqrt(double(n));
  PlaneRule rule;
  if (S.kind() == DropletKind::Disc) {
    double r = S.radius() + reach;
    int panels = std::max(1, int(std::ceil(r * std::sqrt(double(rep.order)))));
    rule = disc_rule(0, r, panels, 10, 4 * rep.order + 16);
  } else {
    const PlaneRule& q = space.quadrature();
    for (std::size_t i = 0; i < q.size(); ++i)
      if (S.delta(q.nodes[i]) < reach) {
        rule.nodes.push_back(q.nodes[i]);
        rule.weights.push_back(q.weights[i]);
      }
  }
  Eigen::MatrixXcd Bq = space.basis_matrix(rule.nodes);
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), rule.size());
  Eigen::MatrixXcd Gr = Bq.adjoint() * (w.cast<Complex>().asDiagonal() * Bq);
  Eigen::MatrixXcd Bc = space.basis_matrix(cfg.points);
  Eigen::MatrixXcd Gn = Bc.adjoint() * Bc / double(n);
  Eigen::LLT<Eigen::MatrixXcd> llt(0.5 * (Gr + Gr.adjoint()));
  if (llt.info() != Eigen::Success) throw NumericalError("mz_constant: restricted Gram is not positive definite");
  Eigen::MatrixXcd Linv = llt.matrixL().solve(Eigen::MatrixXcd::Identity(rep.order, rep.order));
  Eigen::MatrixXcd C = Linv * Gn * Linv.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (C + C.adjoint()), Eigen::EigenvaluesOnly);
  rep.mu = es.eigenvalues()(0);
  if (!(rep.mu > 1e-12)) {
    rep.failed = true;
    rep.constant = std::numeric_limits<double>::infinity();
    rep.note += (rep.note.empty() ? "" : "; ") + std::string("sampling failure: mu <= 1e-12");
    return rep;
  }
  rep.constant = (1 - rho) * (1 - rho) / rep.mu;
  return rep;
}

SamplingReport interpolation_constant(const Configuration& cfg, const Potential& pot, double rho) {
  if (!(rho > 1)) throw ConfigError("interpolation_constant: rho must exceed 1");
  const int n = cfg.n();
  SamplingReport rep;
  rep.order = rounded_order(n, rho, rep.note);
  WeightedPolySpace space = WeightedPolySpace::build(pot, rep.order);
  Eigen::MatrixXcd Bc = space.basis_matrix(cfg.points);
  Eigen::MatrixXcd G = Bc * Bc.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (G + G.adjoint()), Eigen::EigenvaluesOnly);
  rep.mu = es.eigenvalues()(0);
  double scale = es.eigenvalues()(n - 1);
  if (!(rep.mu > 1e-12 * scale)) {
    rep.failed = true;
    rep.constant = std::numeric_limits<double>::infinity();
    rep.note += (rep.note.empty() ? "" : "; ") + std::string("interpolation failure: kernel Gram is singular");
    return rep;
  }
  rep.constant = (rho - 1) * (rho - 1) * n / rep.mu;
  return rep;
}

LocalizedLagrange::LocalizedLagrange(const Configuration& cfg, const Potential& pot, double epsilon)
    : cfg_(cfg),
      eps_(epsilon),
      space_([&] {
        int k = int(std::lround(cfg.n() * epsilon));
        if (k < 2) throw ConfigError("localized_lagrange: n*epsilon must be >= 2");
        return WeightedPolySpace::build(pot, k);
      }()),
      lagrange_(cfg, pot) {
  const int n = cfg.n();
  diag_.resize(n);
  for (int j = 0; j < n; ++j) {
    diag_[j] = space_.one_point(cfg.points[j]);
    if (diag_[j] < 1e-12 * space_.order()) violations_.push_back(j);
  }
}

std::vector<Complex> LocalizedLagrange::values(Complex z) const {
  const int n = cfg_.n();
  std::vector<Complex> l = lagrange_.values(z);
  std::vector<Complex> phz = space_.basis(z);
  const int k = space_.order();
  std::vector<Complex> out(n);
  for (int j = 0; j < n; ++j) {
    if (l[j] == Complex(0, 0)) continue;
    std::vector<Complex> phj = space_.basis(cfg_.points[j]);
    Complex K = 0;
    for (int a = 0; a < k; ++a) K += phz[a] * std::conj(phj[a]);
    Complex f = K / diag_[j];
    out[j] = f * f * l[j];
  }
  return out;
}

double LocalizedLagrange::sum_abs(Complex z) const {
  double s = 0;
  for (Complex v : values(z)) s += std::abs(v);
  return s;
}

Complex localized_lagrange(const Configuration& cfg, const Potential& pot, int j, double epsilon, Complex z) {
  if (j < 0 || j >= cfg.n()) throw ConfigError("localized_lagrange: index out of range");
  LocalizedLagrange ll(cfg, pot, epsilon);
  if (!ll.lower_bound_violations().empty())
    throw NumericalError("localized_lagrange: kernel lower bound violated at a node");
  return ll.values(z)[j];
}

double localized_sum_constant(const Configuration& cfg, const Potential& pot, double epsilon, const Droplet& s,
                              double pitch_factor) {
  LocalizedLagrange ll(cfg, pot, epsilon);
  const int n = cfg.n();
  // basis rows at the nodes are reused for every grid point
  const int k = ll.order();
  WeightedPolySpace space = WeightedPolySpace::build(pot, k);
  Eigen::MatrixXcd Bn = space.basis_matrix(cfg.points);
  std::vector<double> diag(n);
  for (int j = 0; j < n; ++j) diag[j] = Bn.row(j).squaredNorm();
  LagrangeBasis lb(cfg, pot);
  std::vector<Complex> pts = droplet_grid(s, pitch_factor / std::sqrt(double(n)));
  double best = 0;
  std::vector<Complex> lv(n);
  Eigen::VectorXcd phz(k);
  for (Complex z : pts) {
    lb.values_into(z, lv.data());
    space.basis_into(z, phz.data());
    Eigen::VectorXcd K = Bn.conjugate() * phz;
    double sum = 0;
    for (int j = 0; j < n; ++j) {
      Complex f = K(j) / diag[j];
      sum += std::norm(f) * std::abs(lv[j]);
    }
    best = std::max(best, sum);
  }
  return epsilon * best;
}

MZReport mz_report(const Configuration& cfg, const Potential& pot, double rho_sampling, double rho_interp,
                   double M) {
  MZReport r;
  r.rho_sampling = rho_sampling;
  r.rho_interpolation = rho_interp;
  r.gamma = std::min(1 - rho_sampling, rho_interp - 1);
  r.M = M;
  SamplingReport s = mz_constant(cfg, pot, rho_sampling, M);
  SamplingReport i = interpolation_constant(cfg, pot, rho_interp);
  r.mz_constant = s.constant;
  r.sampling_failed = s.failed;
  r.interp_constant = i.constant;
  r.interpolation_failed = i.failed;
  Droplet S = droplet(pot);
  auto sups = sup_norms_lagrange(cfg, pot, S);
  r.lagrange_sup = *std::max_element(sups.begin(), sups.end());
  return r;
}

}  // namespace cglab
