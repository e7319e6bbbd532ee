#include <doctest.h>

#include "cglab/stats.hpp"

using namespace cglab;

namespace {

double brute_spacing(const std::vector<Complex>& z) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < z.size(); ++a)
    for (std::size_t b = a + 1; b < z.size(); ++b) d = std::min(d, std::abs(z[a] - z[b]));
  return std::sqrt(double(z.size())) * d;
}

std::vector<Complex> triangular_patch(int rows) {
  std::vector<Complex> z;
  for (int i = -rows; i <= rows; ++i)
    for (int j = -rows; j <= rows; ++j) z.push_back(Complex(i + 0.5 * j, j * std::sqrt(3.0) / 2));
  return z;
}

// ψ₆ by sorting all distances, independent of the library routine
double psi6_oracle(const std::vector<Complex>& z, double bulk_radius) {
  double total = 0;
  int count = 0;
  for (std::size_t a = 0; a < z.size(); ++a) {
    if (std::abs(z[a]) > bulk_radius) continue;
    std::vector<std::pair<double, Complex>> d;
    for (std::size_t b = 0; b < z.size(); ++b)
      if (b != a) d.push_back({std::abs(z[b] - z[a]), z[b] - z[a]});
    std::sort(d.begin(), d.end(), [](auto& x, auto& y) { return x.first < y.first; });
    Complex s = 0;
    for (int i = 0; i < 6; ++i) s += std::exp(Complex(0, 6 * std::arg(d[i].second)));
    total += std::abs(s) / 6;
    ++count;
  }
  return total / count;
}

}  // namespace

TEST_CASE("spacing examples") {
  CHECK(spacing(make_configuration({0, 0.3, 1})) == doctest::Approx(std::sqrt(3.0) * 0.3));
  CHECK(spacing(make_configuration({0, 0.5, 0.5, 2})) == 0.0);
  CHECK(spacing(make_configuration({1, 1})) == 0.0);
}

TEST_CASE("grid-hash spacing equals brute force on random configurations") {
  Rng rng(21);
  for (int t = 0; t < 1000; ++t) {
    int n = 2 + int(rng.index(120));
    double scale = std::pow(10.0, 4 * rng.uniform() - 2);
    std::vector<Complex> z;
    for (int i = 0; i < n; ++i) {
      // mix of uniform, clustered and collinear clouds
      double x = rng.uniform(), y = rng.uniform();
      if (t % 3 == 1) y = 0;
      if (t % 3 == 2 && i % 2) x *= 1e-3;
      z.emplace_back(scale * x, scale * y);
    }
    CHECK(spacing(make_configuration(z)) == brute_spacing(z));
  }
}

TEST_CASE("disc counts") {
  Configuration empty = make_configuration({10, 11});
  DiscCount c0 = count_disc(empty, 0, 2, 0.5);
  CHECK(c0.n == 0);
  CHECK(c0.n_minus == 0);
  CHECK(c0.n_plus == 0);
  Configuration one = make_configuration({0.3, 5});
  DiscCount c1 = count_disc(one, 0.3, 1, 0.5);
  CHECK(c1.n == 1);
  CHECK(c1.n_minus == 1);
  CHECK(c1.n_plus == 1);
  CHECK_THROWS_AS(count_disc(one, 0, 1, 1), ConfigError);
  Rng rng(4);
  auto g = sample_gibbs(Potential::radial(1), 100, beta_from_c(2, 100), 100, 3);
  int prev = 0;
  for (double L = 0.5; L < 12; L += 0.5) {
    DiscCount c = count_disc(g.config, Complex(0.1, 0.1), L, 0.4);
    CHECK(c.n_minus <= c.n);
    CHECK(c.n <= c.n_plus);
    CHECK(c.n >= prev);
    prev = c.n;
  }
}

TEST_CASE("nested counts are within C L for separated configurations") {
  auto f = fekete(Potential::radial(1), 256, 5);
  double s0 = spacing(f.config);
  double s = 0.5 * s0;
  double worst = 0;
  for (double L = 2; L <= 10; L += 1) {
    DiscCount c = count_disc(f.config, 0, L, s);
    worst = std::max(worst, (c.n_plus - c.n_minus) / L);
  }
  // packing: discs of radius s0/2 around points in the widened annulus
  CHECK(worst <= 16 * (s + s0 / 2) / (s0 * s0));
}

TEST_CASE("vacuum distance") {
  Droplet d = Droplet::disc(1);
  CHECK(vacuum_distance(make_configuration({0, 0.5, Complex(0, 0.9)}), d) == 0.0);
  CHECK(vacuum_distance(make_configuration({0, 1.3, 0.2}), d) == doctest::Approx(0.3));
}

TEST_CASE("psi6") {
  auto lat = triangular_patch(6);
  std::vector<bool> mask(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) mask[i] = std::abs(lat[i]) < 3;
  CHECK(psi6(lat, mask) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(psi6(lat, std::vector<bool>(lat.size(), false)), ConfigError);
  CHECK_THROWS_AS(psi6({0, 1, 2}, {true, true, true}), ConfigError);

  // uniform points in the unit square, bulk = inner disc; library vs oracle over 100 draws
  Rng rng(31);
  double lib = 0, ref = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<Complex> z;
    for (int i = 0; i < 200; ++i) z.emplace_back(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
    std::vector<bool> m(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) m[i] = std::abs(z[i]) <= 0.6;
    lib += psi6(z, m);
    ref += psi6_oracle(z, 0.6);
  }
  CHECK(lib == doctest::Approx(ref).epsilon(1e-12));
  CHECK(lib / 100 < 0.45);
  auto f = fekete(Potential::radial(1), 200, 1);
  CHECK(psi6(f.config, Droplet::disc(1), 2 / std::sqrt(200.0)) > lib / 100 + 0.2);
}

TEST_CASE("family tail and zoom points") {
  std::vector<Configuration> fam;
  for (int n : {16, 32, 64})
    for (int k = 0; k < 2; ++k) fam.push_back(sample_gibbs(Potential::radial(1), n, 10, 20, k).config);
  auto tail = family_tail(fam);
  CHECK(tail.size() == 4);
  for (const auto& c : tail) CHECK(c.n() >= 32);
  CHECK(family_tail({}).empty());

  Potential pot = Potential::radial(1);
  Complex p = boundary_zoom_point(pot, Droplet::disc(1), 100, 0, 2);
  CHECK(std::abs(p - Complex(1.2, 0)) < 1e-14);
  CHECK(inner_distance(Droplet::disc(1), 0.25) == doctest::Approx(0.75));
  CHECK(inner_distance(Droplet::annulus(0.5, 1), 0.6) == doctest::Approx(0.1));
  for (Complex c : adversarial_centers(Droplet::disc(1), 100, 3, Regime::Bulk)) CHECK(std::abs(c) <= 0.7 + 1e-12);
  for (Complex c : adversarial_centers(Droplet::disc(1), 100, 3, Regime::Boundary))
    CHECK(std::abs(c) == doctest::Approx(1.0));
}

TEST_CASE("density and discrepancy on Fekete families") {
  Potential pot = Potential::radial(1);
  std::vector<Configuration> fam;
  for (int n : {64, 128, 256}) fam.push_back(fekete(pot, n, 2).config);
  auto bulk = bl_density(fam, pot, Zoom::fixed(0), {4, 6});
  for (const auto& r : bulk) {
    CHECK(r.expected == 1.0);
    CHECK(r.tail_min > 0.7);
    CHECK(r.tail_max < 1.3);
  }
  auto ext = bl_density(fam, pot, Zoom::fixed(1.5), {2, 3});
  for (const auto& r : ext) {
    CHECK(r.tail_max == 0.0);
    CHECK(r.expected == 0.0);
  }
  auto bd = bl_density(fam, pot, Zoom::boundary(0, 0), {4});
  CHECK(bd[0].expected == 0.5);
  CHECK(std::abs(bd[0].tail_max - 0.5) < 0.2);
  DiscrepancyResult d = discrepancy(fam, pot, Zoom::adversarial(Regime::Bulk), 3, Regime::Bulk);
  CHECK(d.normalized == doctest::Approx(d.residual / std::pow(3.0, 5.0 / 3)));
  CHECK_THROWS_AS(discrepancy(fam, pot, Zoom::fixed(0), 1.5, Regime::Bulk), ConfigError);
}

TEST_CASE("stat report and separation scan") {
  Potential pot = Potential::radial(1);
  auto f = fekete(pot, 100, 4);
  StatReport r = stat_report(f.config, pot, {2, 3});
  CHECK(r.n == 100);
  CHECK(r.spacing == spacing(f.config));
  CHECK(r.counts.size() == 6);
  for (const auto& c : r.counts) {
    CHECK(c.counts.n_minus <= c.counts.n);
    CHECK(c.counts.n <= c.counts.n_plus);
  }
  CHECK(r.psi6 > 0);
  auto scan = separation_scan(pot, {1, 4}, {16, 32}, 3, 50, 7);
  CHECK(scan.rows.size() == 4);
  CHECK(scan.tail_min.size() == 2);
  for (double v : scan.tail_min) CHECK(v > 0);
  CHECK(scan.s0_prefactor > 0);
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 2, 3}) == 2.5);
}

TEST_CASE("spacing stays above the (n log n)^(-1/(2 beta)) trend") {
  // monitored: the normalized median should neither collapse nor drift by more than a small factor
  for (double beta : {1.0, 2.0}) {
    std::vector<double> norm;
    for (int n : {64, 128, 256}) {
      std::vector<double> s;
      for (int k = 0; k < 5; ++k) s.push_back(spacing(sample_gibbs(Potential::radial(1), n, beta, 150, 900 + k).config));
      double scale = std::pow(n * std::log(double(n)), -1 / (2 * beta));
      norm.push_back(median(s) / scale);
      MESSAGE("beta=" << beta << " n=" << n << " s_n/(n log n)^(-1/2b)=" << norm.back());
    }
    for (double v : norm) CHECK(v > 0.05);
    CHECK(*std::min_element(norm.begin(), norm.end()) * 4 > *std::max_element(norm.begin(), norm.end()));
  }
}
