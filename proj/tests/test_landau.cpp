#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>

#include "cglab/landau.hpp"
#include "cglab/limits.hpp"

using namespace cglab;

TEST_CASE("ginibre concentration on a centred disc has incomplete-gamma eigenvalues") {
  // T is diagonal in the monomial basis: λ_k = P(k+1, m r²)
  const int m = 64;
  WeightedPolySpace s = WeightedPolySpace::build(Potential::radial(1), m);
  double r = 0.5;
  ConcentrationOptions opt;
  opt.pointwise_limit = 20000;
  ConcentrationSpectrum spec = concentration(s, Omega::disc(0, r), opt);
  std::vector<double> ref;
  for (int k = 0; k < m; ++k) ref.push_back(boost::math::gamma_p(k + 1.0, m * r * r));
  std::sort(ref.rbegin(), ref.rend());
  REQUIRE(spec.eigenvalues.size() == std::size_t(m));
  for (int k = 0; k < m; ++k) CHECK(std::abs(spec.eigenvalues[k] - ref[k]) < 1e-9);
  CHECK(spec.trace == doctest::Approx(m * r * r).epsilon(1e-10));
  CHECK(std::abs(spec.trace - spec.eig_sum) < 1e-8);
  CHECK(std::abs(spec.trace_sq - spec.eig_sq_sum) < 1e-8);
  CHECK(spec.pointwise_trace_sq);
}

TEST_CASE("trace identities for off-centre lenses and other potentials") {
  for (auto pot : {Potential::radial(2), Potential::radial_harmonic(2, std::sqrt(2.0), 2)}) {
    WeightedPolySpace s = WeightedPolySpace::build(pot, 40);
    ConcentrationSpectrum spec = concentration(s, Omega::lens(Complex(0.6, 0.2), 0.5, 0, 0.9));
    CHECK(std::abs(spec.trace - spec.eig_sum) < 1e-8);
    CHECK(std::abs(spec.trace_sq - spec.eig_sq_sum) < 1e-8);
    for (double l : spec.eigenvalues) {
      CHECK(l >= -1e-10);
      CHECK(l <= 1 + 1e-10);
    }
    CHECK(std::is_sorted(spec.eigenvalues.rbegin(), spec.eigenvalues.rend()));
  }
}

TEST_CASE("whole plane and empty region") {
  WeightedPolySpace s = WeightedPolySpace::build(Potential::radial(1), 24);
  ConcentrationSpectrum w = concentration_whole(s);
  for (double l : w.eigenvalues) CHECK(l == doctest::Approx(1.0).epsilon(1e-10));
  ConcentrationSpectrum e = concentration(s, Omega::empty());
  CHECK(e.nodes == 0);
  for (double l : e.eigenvalues) CHECK(l == 0.0);
  CHECK(e.trace == 0.0);
}

TEST_CASE("eigenvalue count inequality holds for arbitrary spectra in [0,1]") {
  Rng rng(12);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> ev(1 + rng.index(60));
    for (double& v : ev) {
      double u = rng.uniform();
      v = u < 0.2 ? 0.0 : u > 0.8 ? 1.0 : rng.uniform();
    }
    for (int i = 1; i <= 19; ++i) CHECK(eig_count_check(ev, 0.05 * i).holds);
  }
  CHECK_THROWS_AS(eig_count_check(std::vector<double>{0.5}, 0.0), ConfigError);
  CHECK_THROWS_AS(eig_count_check(std::vector<double>{0.5}, 1.0), ConfigError);
  CountCheck c = eig_count_check(std::vector<double>{1, 1, 0, 0}, 0.5);
  CHECK(c.count == 2);
  CHECK(c.lhs == 0.0);
  CHECK(c.rhs == 0.0);
}

TEST_CASE("trace asymptotics for the ginibre bulk and boundary") {
  auto pot = Potential::radial(1);
  auto b = trace_asymptotics(pot, 0, Regime::Bulk, 3, 1, 2, {64});
  CHECK(b[0].ratio == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(b[0].bound_residual <= 0);
  auto e = trace_asymptotics(pot, 1, Regime::Boundary, 4, 1, 2, {128});
  CHECK(e[0].ratio > 0.85);
  CHECK(e[0].ratio < 1.15);
  auto r = trace_asymptotics(pot, 0, Regime::Bulk, 3, 0.51, 2, {64});
  CHECK(r[0].order == 33);
  CHECK_FALSE(r[0].note.empty());
  CHECK_THROWS_AS(trace_asymptotics(pot, 0, Regime::Bulk, 0, 1, 2, {64}), ConfigError);
  CHECK_THROWS_AS(trace_asymptotics(Potential::radial_harmonic(2, 0.5, 2), 0, Regime::Bulk, 2, 1, 2, {32}),
                  UnsupportedError);
}

TEST_CASE("sampling and interpolation constants") {
  auto pot = Potential::radial(1);
  auto f = fekete(pot, 64, 2);
  SamplingReport s = mz_constant(f.config, pot, 0.8, 2);
  CHECK_FALSE(s.failed);
  CHECK(std::isfinite(s.constant));
  CHECK(s.order == 51);
  SamplingReport i = interpolation_constant(f.config, pot, 1.25);
  CHECK_FALSE(i.failed);
  CHECK(std::isfinite(i.constant));
  CHECK_THROWS_AS(mz_constant(f.config, pot, 1.2, 2), ConfigError);
  CHECK_THROWS_AS(interpolation_constant(f.config, pot, 0.9), ConfigError);
  // a clustered configuration cannot sample the space
  std::vector<Complex> z;
  for (int k = 0; k < 64; ++k) z.push_back(std::polar(0.05, 2 * kPi * k / 64));
  SamplingReport bad = mz_constant(make_configuration(z), pot, 0.8, 2);
  CHECK(bad.failed);
  CHECK(std::isinf(bad.constant));
}

TEST_CASE("localized lagrange polynomials") {
  auto pot = Potential::radial(1);
  auto f = fekete(pot, 40, 3);
  LocalizedLagrange ll(f.config, pot, 0.25);
  CHECK(ll.order() == 10);
  CHECK(ll.lower_bound_violations().empty());
  for (int j = 0; j < 40; j += 7) {
    auto v = ll.values(f.config.points[j]);
    for (int k = 0; k < 40; ++k) CHECK(std::abs(v[k] - Complex(k == j ? 1.0 : 0.0)) < 1e-10);
  }
  Complex z(0.1, 0.2);
  CHECK(std::abs(localized_lagrange(f.config, pot, 3, 0.25, z) - ll.values(z)[3]) < 1e-14);
  CHECK(ll.sum_abs(z) >= 0);
  double c = localized_sum_constant(f.config, pot, 0.25, Droplet::disc(1));
  CHECK(std::isfinite(c));
  CHECK(c > 0);
  CHECK_THROWS_AS(LocalizedLagrange(f.config, pot, 0.01), ConfigError);
}

TEST_CASE("mz report") {
  auto pot = Potential::radial(1);
  auto g = sample_gibbs(pot, 64, beta_from_c(4, 64), 300, 8);
  MZReport r = mz_report(g.config, pot, 0.8, 1.25, 2);
  CHECK(r.gamma == doctest::Approx(0.2));
  CHECK(std::isfinite(r.mz_constant));
  CHECK(std::isfinite(r.interp_constant));
  CHECK(r.lagrange_sup >= 1.0);
}

TEST_CASE("trace is monotone under inclusion") {
  WeightedPolySpace s = WeightedPolySpace::build(Potential::radial(2), 48);
  double prev = 0;
  for (double r : {0.1, 0.2, 0.35, 0.5, 0.8, 1.2}) {
    double t = concentration(s, Omega::disc(Complex(0.1, 0.05), r)).trace;
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("one-point function is bounded above and below on S_M") {
  for (double M : {0.0, 1.0, 2.0}) {
    double lo = 1e300, hi = 0;
    for (int m : {32, 64, 128}) {
      WeightedPolySpace s = WeightedPolySpace::build(Potential::radial(1), m);
      double R = 1 + M / std::sqrt(double(m));
      for (Complex z : droplet_grid(Droplet::disc(R), 0.02)) {
        double v = s.one_point(z) / m;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      for (int i = 0; i < 64; ++i) {
        double v = s.one_point(std::polar(R, 2 * kPi * i / 64)) / m;
        lo = std::min(lo, v);
      }
    }
    // boundary profile value at distance M is F(2M)
    CHECK(lo >= 0.5 * F_erfc(2 * M).real());
    CHECK(hi <= 1.0 + 1e-12);
  }
}
