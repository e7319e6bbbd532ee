#include <doctest.h>

#include <set>

#include "cglab/ensemble.hpp"

using namespace cglab;

namespace {

double brute_h(const std::vector<Complex>& z, const Potential& pot) {
  double h = 0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    for (std::size_t k = j + 1; k < z.size(); ++k) h -= std::log(std::norm(z[j] - z[k]));
    h += z.size() * pot.q(z[j]);
  }
  return h;
}

std::vector<Complex> random_points(Rng& rng, int n) {
  std::vector<Complex> z;
  for (int i = 0; i < n; ++i) z.emplace_back(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
  return z;
}

}  // namespace

TEST_CASE("rng is reproducible and seeds are distinct") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(derive_seed(7, k));
  CHECK(seen.size() == 1000);
  Rng c(1);
  double m = 0, v = 0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    double x = c.normal();
    m += x;
    v += x * x;
  }
  CHECK(std::abs(m / N) < 0.01);
  CHECK(std::abs(v / N - 1) < 0.02);
}

TEST_CASE("configuration validation and provenance names") {
  CHECK_THROWS_AS(make_configuration({0}), ConfigError);
  CHECK_THROWS_AS(make_configuration({0, Complex(std::nan(""), 0)}), ConfigError);
  for (auto p : {Provenance::Gibbs, Provenance::Fekete, Provenance::Synthetic})
    CHECK(provenance_from_string(to_string(p)) == p);
  CHECK_THROWS_AS(provenance_from_string("quantum"), ConfigError);
  CHECK(beta_from_c(2.0, 100) == doctest::Approx(2 * std::log(100.0)));
}

TEST_CASE("hamiltonian against brute force") {
  Rng rng(9);
  Potential pot = Potential::radial(2);
  for (int t = 0; t < 1000; ++t) {
    auto z = random_points(rng, 7);
    Configuration cfg = make_configuration(z);
    CHECK(hamiltonian(cfg, pot) == doctest::Approx(brute_h(z, pot)).epsilon(1e-12));
    int j = int(rng.index(7));
    Complex w(rng.uniform(), rng.uniform());
    auto z2 = z;
    z2[j] = w;
    CHECK(std::abs(hamiltonian_delta(cfg, pot, j, w) - (brute_h(z2, pot) - brute_h(z, pot))) <= 1e-9);
  }
  Configuration dup = make_configuration({0.5, 0.5, 0});
  CHECK(std::isinf(hamiltonian(dup, pot)));
  CHECK_THROWS(grad_hamiltonian(dup, pot));
}

TEST_CASE("hamiltonian gradient by finite differences") {
  Rng rng(10);
  Potential pot = Potential::radial_harmonic(2, std::sqrt(2.0), 2);
  auto z = random_points(rng, 6);
  Configuration cfg = make_configuration(z);
  auto g = grad_hamiltonian(cfg, pot);
  const double h = 1e-6;
  for (int j = 0; j < 6; ++j) {
    auto zx = z, zy = z;
    zx[j] += h;
    zy[j] += Complex(0, h);
    double gx = (brute_h(zx, pot) - brute_h(z, pot)) / h;
    double gy = (brute_h(zy, pot) - brute_h(z, pot)) / h;
    CHECK(g[j].real() == doctest::Approx(gx).epsilon(1e-4).scale(1));
    CHECK(g[j].imag() == doctest::Approx(gy).epsilon(1e-4).scale(1));
  }
}

TEST_CASE("metropolis acceptance") {
  CHECK(metropolis_accept(-1.0, 10, 0.999));
  CHECK(metropolis_accept(0.1, 1.0, std::exp(-0.1) * 0.99));
  CHECK_FALSE(metropolis_accept(0.1, 1.0, std::exp(-0.1) * 1.01));
  CHECK_FALSE(metropolis_accept(std::numeric_limits<double>::infinity(), 1.0, 0.0));
}

TEST_CASE("gibbs sampler is deterministic and localizes") {
  Potential pot = Potential::radial(1);
  auto a = sample_gibbs(pot, 64, beta_from_c(4, 64), 200, 123);
  auto b = sample_gibbs(pot, 64, beta_from_c(4, 64), 200, 123);
  CHECK(a.config.points == b.config.points);
  CHECK(a.config.provenance == Provenance::Gibbs);
  CHECK(a.config.seed == 123);
  CHECK(a.diagnostics.energy_trace.size() == 200);
  CHECK(a.diagnostics.acceptance_rate > 0.1);
  CHECK(a.diagnostics.acceptance_rate < 0.6);
  for (Complex z : a.config.points) CHECK(std::abs(z) < 1 + 3 / std::sqrt(64.0));
  auto c = sample_gibbs(pot, 64, beta_from_c(4, 64), 200, 124);
  CHECK(c.config.points != a.config.points);
  auto snaps = sample_gibbs_chain(pot, 8, 1.0, 500, 5, 10);
  CHECK(snaps.size() == 40);
  CHECK_THROWS_AS(sample_gibbs(pot, 1, 1.0, 10, 1), ConfigError);
}

TEST_CASE("equilibrium draw follows the droplet") {
  Rng rng(4);
  auto z = equilibrium_draw(Potential::radial(1), 4000, rng);
  int inner = 0;
  for (Complex w : z) {
    CHECK(std::abs(w) <= 1.0);
    if (std::abs(w) < 0.5) ++inner;
  }
  CHECK(inner / 4000.0 == doctest::Approx(0.25).epsilon(0.08));
}

TEST_CASE("fekete small cases") {
  Potential pot = Potential::radial(1);
  auto f2 = fekete(pot, 2, 1);
  CHECK(f2.converged);
  CHECK(f2.energy == doctest::Approx(1.0).epsilon(1e-10));
  for (Complex z : f2.config.points) CHECK(std::abs(z) == doctest::Approx(0.5).epsilon(1e-8));
  auto f3 = fekete(pot, 3, 2);
  for (Complex z : f3.config.points) CHECK(std::abs(z) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-8));
  CHECK(std::isinf(f3.config.beta));
  CHECK(f3.config.provenance == Provenance::Fekete);
  auto f64 = fekete(pot, 64, 3);
  CHECK(f64.converged);
  CHECK(f64.grad_max <= 1e-8 * 64);
  // gradient vanishes at the minimizer
  auto g = grad_hamiltonian(f64.config, pot);
  for (Complex v : g) CHECK(std::abs(v) < 1e-6);
  // no random configuration beats it
  Rng rng(8);
  auto rnd = make_configuration(equilibrium_draw(pot, 64, rng));
  CHECK(f64.energy < hamiltonian(rnd, pot));
}

TEST_CASE("metropolis rule reproduces a two-state Boltzmann measure") {
  // states with energies 0 and 1, symmetric flip proposal; chi-square with one degree of freedom
  const double beta = 0.7;
  Rng rng(77);
  int state = 0;
  long counts[2] = {0, 0};
  const int samples = 20000, thin = 20;
  for (int s = 0; s < samples * thin; ++s) {
    double dh = state == 0 ? 1.0 : -1.0;
    if (metropolis_accept(dh, beta, rng.uniform())) state = 1 - state;
    if (s % thin == 0) ++counts[state];
  }
  double p1 = std::exp(-beta) / (1 + std::exp(-beta));
  double e1 = samples * p1, e0 = samples - e1;
  double chi2 = std::pow(counts[0] - e0, 2) / e0 + std::pow(counts[1] - e1, 2) / e1;
  CHECK(chi2 < 6.635);  // p > 0.01
}

TEST_CASE("two particles at large beta sit near +-1/2") {
  auto g = sample_gibbs(Potential::radial(1), 2, 500, 400, 4);
  for (Complex z : g.config.points) CHECK(std::abs(std::abs(z) - 0.5) < 0.1);
  CHECK(std::abs(g.config.points[0] + g.config.points[1]) < 0.15);
  CHECK(Potential::radial(1).grad(0) == Complex(0, 0));
}

TEST_CASE("radial distribution at beta=1 matches the equilibrium CDF") {
  // Wasserstein-1 between empirical CDF of |z| and r² on [0,1], pooled over seeds
  std::vector<double> r;
  for (int k = 0; k < 5; ++k) {
    auto g = sample_gibbs(Potential::radial(1), 64, 1.0, 400, 40 + k);
    for (Complex z : g.config.points) r.push_back(std::abs(z));
  }
  std::sort(r.begin(), r.end());
  const int grid = 2000;
  double w1 = 0;
  std::size_t idx = 0;
  for (int i = 0; i < grid; ++i) {
    double x = 1.5 * (i + 0.5) / grid;
    while (idx < r.size() && r[idx] <= x) ++idx;
    double emp = double(idx) / r.size();
    w1 += std::abs(emp - std::min(1.0, x * x)) * 1.5 / grid;
  }
  CHECK(w1 < 0.1);
}

TEST_CASE("fekete energy beats cold gibbs samples") {
  Potential pot = Potential::radial(1);
  const int n = 32;
  auto f = fekete(pot, n, 12);
  for (int k = 0; k < 20; ++k) {
    auto g = sample_gibbs(pot, n, 16384, 200, 500 + k);
    CHECK(f.energy <= hamiltonian(g.config, pot) + 1e-9);
  }
}
