#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>

#include "cglab/polyspace.hpp"
#include "cglab/quadrature.hpp"

using namespace cglab;

namespace {

// m e^{-m|ζ|²} Σ_{k<m} (m|ζ|²)^k/k! = m Q(m, m|ζ|²)
double ginibre_density(int m, Complex z) { return m * boost::math::gamma_q(double(m), m * std::norm(z)); }

// log ∫ |ζ|^{2k} e^{-m|ζ|^{2p}} dA = log Γ((k+1)/p) - log p - (k+1)/p log m
double gamma_log_norm(int k, double m, int p) {
  double a = double(k + 1) / p;
  return std::lgamma(a) - std::log(double(p)) - a * std::log(m);
}

}  // namespace

TEST_CASE("radial monomial norms against the gamma function") {
  for (int p : {1, 2, 3})
    for (int m : {4, 64, 1024})
      for (int k : {0, 1, m / 2, m - 1})
        CHECK(radial_log_norm(k, m, p) == doctest::Approx(gamma_log_norm(k, m, p)).epsilon(1e-12).scale(1));
}

TEST_CASE("ginibre one-point function against the closed form") {
  Rng rng(1);
  for (int m : {8, 64, 256, 2048}) {
    WeightedPolySpace s = WeightedPolySpace::build(Potential::radial(1), m);
    for (int i = 0; i < 50; ++i) {
      Complex z = std::polar(1.4 * std::sqrt(rng.uniform()), 2 * kPi * rng.uniform());
      double ref = ginibre_density(m, z);
      if (ref < 1e-250) continue;
      CHECK(std::abs(s.one_point(z) - ref) <= 1e-10 * ref);
    }
  }
}

TEST_CASE("kernel is hermitian and the basis orthonormal") {
  for (auto pot : {Potential::radial(2), Potential::radial_harmonic(2, std::sqrt(2.0), 2),
                   Potential::radial_harmonic(3, 2 / std::sqrt(5.0), 3)}) {
    WeightedPolySpace s = WeightedPolySpace::build(pot, 32);
    Complex z(0.2, 0.3), w(-0.4, 0.1);
    CHECK(std::abs(s.kernel(z, w) - std::conj(s.kernel(w, z))) < 1e-12 * std::abs(s.kernel(z, w)));
    CHECK(s.kernel(z, z).real() == doctest::Approx(s.one_point(z)).epsilon(1e-12));
    CHECK(s.gram_deviation() < 1e-8);
    CHECK(s.condition_estimate() < 1e12);
    const PlaneRule& q = s.quadrature();
    Eigen::MatrixXcd B = s.basis_matrix(q.nodes);
    Eigen::VectorXd wt = Eigen::Map<const Eigen::VectorXd>(q.weights.data(), q.size());
    Eigen::MatrixXcd G = B.adjoint() * wt.cast<Complex>().asDiagonal() * B;
    CHECK((G - Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("reproducing property and Berezin normalization") {
  for (int p : {1, 2}) {
    WeightedPolySpace s = WeightedPolySpace::build(Potential::radial(p), 48);
    const PlaneRule& q = s.quadrature();
    Complex z(0.3, -0.2), z2(-0.1, 0.5);
    Complex rep = 0;
    double ber = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      rep += q.weights[i] * s.kernel(z, q.nodes[i]) * s.kernel(q.nodes[i], z2);
      ber += q.weights[i] * s.berezin(z, q.nodes[i]);
    }
    CHECK(std::abs(rep - s.kernel(z, z2)) <= 1e-7 * std::abs(s.kernel(z, z2)));
    CHECK(ber == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("harmonic space with t=0 equals the radial space") {
  WeightedPolySpace a = WeightedPolySpace::build(Potential::radial(2), 24);
  WeightedPolySpace b = WeightedPolySpace::build(Potential::radial_harmonic(2, 0.0, 2), 24);
  for (Complex z : {Complex(0.1, 0.2), Complex(0.8, -0.3), Complex(-1.0, 0.4)})
    CHECK(b.one_point(z) == doctest::Approx(a.one_point(z)).epsilon(1e-10));
}

TEST_CASE("total mass of the one-point function is m") {
  WeightedPolySpace s = WeightedPolySpace::build(Potential::radial_harmonic(2, std::sqrt(2.0), 2), 40);
  const PlaneRule& q = s.quadrature();
  double t = 0;
  for (std::size_t i = 0; i < q.size(); ++i) t += q.weights[i] * s.one_point(q.nodes[i]);
  CHECK(t == doctest::Approx(40.0).epsilon(1e-9));
}

TEST_CASE("lagrange basis against the product formula") {
  Rng rng(2);
  Potential pot = Potential::radial(1);
  std::vector<Complex> z;
  for (int i = 0; i < 6; ++i) z.emplace_back(rng.uniform() - 0.5, rng.uniform() - 0.5);
  Configuration cfg = make_configuration(z);
  LagrangeBasis lb(cfg, pot);
  Complex w(0.13, -0.27);
  auto v = lb.values(w);
  for (int j = 0; j < 6; ++j) {
    Complex num = 1;
    for (int k = 0; k < 6; ++k)
      if (k != j) num *= (w - z[k]) / (z[j] - z[k]);
    Complex ref = num * std::exp(-0.5 * 6 * (pot.q(w) - pot.q(z[j])));
    CHECK(std::abs(v[j] - ref) < 1e-12 * std::abs(ref));
    auto at = lb.values(z[j]);
    for (int k = 0; k < 6; ++k) CHECK(at[k] == Complex(k == j ? 1.0 : 0.0, 0.0));
  }
  CHECK_THROWS_AS(LagrangeBasis(make_configuration({0.1, 0.1, 0.2}), pot), ConfigError);
}

TEST_CASE("lagrange mass for two ginibre points") {
  // ∫|ℓ_1|² dA = e^{2|a|²}(1/4 + |b|²/2)/|a-b|² for nodes a, b
  Complex a(0.3, 0.1), b(-0.2, 0.25);
  auto mass = lagrange_power_mass(make_configuration({a, b}), Potential::radial(1), 1.0);
  double ref = std::exp(2 * std::norm(a)) * (0.25 + 0.5 * std::norm(b)) / std::norm(a - b);
  CHECK(mass[0] == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("pointwise and Bernstein estimates hold for random elements") {
  WeightedPolySpace s = WeightedPolySpace::build(Potential::radial(1), 64);
  for (double p : {1.0, 2.0}) {
    EstimateCheck c = verify_pointwise_lp(s, p, 1.0, 50, 3);
    CHECK(c.holds);
    CHECK(c.implied_c <= c.bound);
  }
  EstimateCheck b = verify_bernstein(s, 50, 4);
  CHECK(b.holds);
}

TEST_CASE("lagrange sup norms on a droplet grid") {
  Potential pot = Potential::radial(1);
  auto f = fekete(pot, 32, 1);
  auto sup = sup_norms_lagrange(f.config, pot, Droplet::disc(1));
  for (double v : sup) {
    CHECK(v >= 1.0);
    CHECK(v < 3.0);
  }
  auto grid = droplet_grid(Droplet::disc(1), 0.1);
  for (Complex z : grid) CHECK(std::abs(z) <= 1.0);
  CHECK(double(grid.size()) == doctest::Approx(kPi / 0.01).epsilon(0.05));
}

TEST_CASE("exact identity for two particles") {
  auto r = verify_exact_identity(Potential::radial(1), 2, 1.0, 16, 3000, 0.8, 5);
  CHECK_FALSE(r.inconclusive);
  CHECK(std::abs(r.estimate - r.target) <= 3 * r.std_error);
  CHECK_THROWS_AS(verify_exact_identity(Potential::radial(1), 20, 1.0, 4, 10, 0.8, 5), ConfigError);
}

TEST_CASE("reproducing property on random elements") {
  for (auto pot : {Potential::radial(1), Potential::radial_harmonic(2, std::sqrt(2.0), 2)}) {
    const int m = 32;
    WeightedPolySpace s = WeightedPolySpace::build(pot, m);
    const PlaneRule& q = s.quadrature();
    Rng rng(41);
    Eigen::MatrixXcd C(m, 50);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < 50; ++j) C(i, j) = Complex(rng.normal(), rng.normal());
    Eigen::MatrixXcd B = s.basis_matrix(q.nodes);
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(q.weights.data(), q.size());
    // ∫ K(ζ,η) f(η) dA(η) = Σ_k φ_k(ζ) ∫ conj(φ_k) f
    Eigen::MatrixXcd P = B.adjoint() * (w.cast<Complex>().asDiagonal() * (B * C));
    std::vector<Complex> zs;
    for (int i = 0; i < 20; ++i) zs.push_back(std::polar(rng.uniform(), 2 * kPi * rng.uniform()));
    Eigen::MatrixXcd Z = s.basis_matrix(zs);
    Eigen::MatrixXcd lhs = Z * P, rhs = Z * C;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-7 * rhs.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("sampled kernel Gram matrices are hermitian and positive semidefinite") {
  Rng rng(43);
  for (auto pot : {Potential::radial(1), Potential::radial(2), Potential::radial_harmonic(3, 2 / std::sqrt(5.0), 3)}) {
    WeightedPolySpace s = WeightedPolySpace::build(pot, 24);
    std::vector<Complex> z;
    for (int i = 0; i < 40; ++i) z.push_back(std::polar(1.2 * rng.uniform(), 2 * kPi * rng.uniform()));
    Eigen::MatrixXcd K(40, 40);
    for (int a = 0; a < 40; ++a)
      for (int b = 0; b < 40; ++b) K(a, b) = s.kernel(z[a], z[b]);
    CHECK((K - K.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * K.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(K);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("maximum principle: weighted sup is attained on the droplet") {
  const int m = 16;
  Potential pot = Potential::radial(1);
  WeightedPolySpace s = WeightedPolySpace::build(pot, m);
  // S grid plus a dense boundary circle; the outer grid covers D(0, 2)
  std::vector<Complex> inner = droplet_grid(Droplet::disc(1), 0.02);
  for (int i = 0; i < 2000; ++i) inner.push_back(std::polar(1.0, 2 * kPi * i / 2000));
  std::vector<Complex> outer = droplet_grid(Droplet::disc(2), 0.04);
  Eigen::MatrixXcd Bi = s.basis_matrix(inner), Bo = s.basis_matrix(outer);
  Rng rng(47);
  int bad = 0;
  for (int batch = 0; batch < 10; ++batch) {
    Eigen::MatrixXcd C(m, 100);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < 100; ++j) C(i, j) = Complex(rng.normal(), rng.normal());
    Eigen::VectorXd mi = (Bi * C).cwiseAbs().colwise().maxCoeff();
    Eigen::VectorXd mo = (Bo * C).cwiseAbs().colwise().maxCoeff();
    for (int j = 0; j < 100; ++j)
      if (mo(j) > mi(j) * (1 + 1e-3)) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("lagrange interpolation equals minimal-norm kernel interpolation") {
  const int m = 16;
  Potential pot = Potential::radial(1);
  auto f = fekete(pot, m, 6);
  WeightedPolySpace s = WeightedPolySpace::build(pot, m);
  LagrangeBasis lb(f.config, pot);
  Rng rng(53);
  Eigen::VectorXcd c(m);
  for (int i = 0; i < m; ++i) c(i) = Complex(rng.normal(), rng.normal());
  Eigen::MatrixXcd Bn = s.basis_matrix(f.config.points);
  Eigen::VectorXcd vals = Bn * c;
  // g = Σ a_j K(·, ζ_j) with K(ζ_i, ζ_j) a = f(ζ_i)
  Eigen::MatrixXcd K = Bn * Bn.adjoint();
  Eigen::VectorXcd a = K.ldlt().solve(vals);
  for (int t = 0; t < 20; ++t) {
    Complex z = std::polar(1.1 * rng.uniform(), 2 * kPi * rng.uniform());
    auto l = lb.values(z);
    Complex via_l = 0;
    for (int j = 0; j < m; ++j) via_l += vals(j) * l[j];
    Complex via_k = 0;
    for (int j = 0; j < m; ++j) via_k += a(j) * s.kernel(z, f.config.points[j]);
    Complex exact = s.eval(c, z);
    CHECK(std::abs(via_l - exact) <= 1e-7 * vals.cwiseAbs().maxCoeff());
    CHECK(std::abs(via_k - exact) <= 1e-7 * vals.cwiseAbs().maxCoeff());
  }
}
