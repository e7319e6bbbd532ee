#include <doctest.h>

#include "cglab/quadrature.hpp"

using namespace cglab;

namespace {

double lens_area(double d, double r1, double r2) {
  if (d >= r1 + r2) return 0;
  if (d <= std::abs(r1 - r2)) return std::pow(std::min(r1, r2), 2);
  double a = r1 * r1 * std::acos((d * d + r1 * r1 - r2 * r2) / (2 * d * r1)) +
             r2 * r2 * std::acos((d * d + r2 * r2 - r1 * r1) / (2 * d * r2)) -
             0.5 * std::sqrt((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2));
  return a / kPi;
}

}  // namespace

TEST_CASE("gauss legendre integrates polynomials of degree 2N-1") {
  for (int order : {7, 10, 15, 20, 25, 30}) {
    LineRule r = gauss_legendre(-0.5, 2.0, order);
    int deg = 2 * order - 1;
    double s = 0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
    double exact = (std::pow(2.0, deg + 1) - std::pow(-0.5, deg + 1)) / (deg + 1);
    CHECK(s == doctest::Approx(exact).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gauss_legendre(0, 1, 8), ConfigError);
  CHECK_THROWS_AS(composite_gauss(0, 1, 0, 10), ConfigError);
}

TEST_CASE("composite rule integrates a gaussian") {
  LineRule r = composite_gauss_width(-8, 8, 0.5, 10);
  double s = 0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::exp(-r.nodes[i] * r.nodes[i]);
  CHECK(s == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
}

TEST_CASE("disc and annulus areas under dA") {
  CHECK(disc_rule(0.3, 1.7, 4, 10, 32).total() == doctest::Approx(1.7 * 1.7).epsilon(1e-13));
  CHECK(annulus_rule(0, 0.5, 1.5, 3, 10, 16).total() == doctest::Approx(2.0).epsilon(1e-13));
  // ∫|z|^2 dA over D(0,1) = 1/2
  PlaneRule r = disc_rule(0, 1, 2, 10, 16);
  double s = 0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::norm(r.nodes[i]);
  CHECK(s == doctest::Approx(0.5).epsilon(1e-13));
  CHECK_THROWS_AS(annulus_rule(0, 1, 1, 1, 10, 8), ConfigError);
}

TEST_CASE("lens rule matches the circle intersection area") {
  struct Case {
    Complex c1;
    double r1;
    Complex c2;
    double r2;
  };
  for (auto c : {Case{0, 1, 1.2, 0.8}, Case{Complex(0.3, -0.2), 0.4, Complex(0.5, 0.3), 1.0},
                 Case{0, 0.5, 0, 2.0}, Case{1.0, 0.25, 0, 1.05}, Case{0, 2.0, 0.5, 0.3}}) {
    PlaneRule r = lens_rule(c.c1, c.r1, c.c2, c.r2, 0.05, 40);
    CHECK(r.total() == doctest::Approx(lens_area(std::abs(c.c1 - c.c2), c.r1, c.r2)).epsilon(1e-10));
    for (Complex z : r.nodes) {
      CHECK(std::abs(z - c.c1) <= c.r1 + 1e-12);
      CHECK(std::abs(z - c.c2) <= c.r2 + 1e-12);
    }
  }
  CHECK(lens_rule(0, 1, 3, 1, 0.1, 10).size() == 0);
  PlaneRule d = lens_rule(0.2, 0.7, 0, std::numeric_limits<double>::infinity(), 0.1, 20);
  CHECK(d.total() == doctest::Approx(0.49).epsilon(1e-12));
}
