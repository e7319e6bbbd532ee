#include "cglab/special.hpp"

#include <algorithm>

namespace cglab {

namespace {

constexpr double kFactor = 1.12837916709551257388;  // 2/sqrt(pi)

struct Wofz {
  double u, v;    // w(|x| + i|y|)
  bool series;    // small-|z| branch taken
  double u2, v2;  // exp(-z^2) for the series branch
};

Wofz wofz_first_quadrant(double xabs, double yabs) {
  double x = xabs / 6.3, y = yabs / 4.4;
  double qrho = x * x + y * y;
  double xquad = xabs * xabs - yabs * yabs;
  double yquad = 2 * xabs * yabs;
  Wofz r{0, 0, false, 0, 0};
  if (qrho < 0.085264) {
    qrho = (1 - 0.85 * y) * std::sqrt(qrho);
    int n = static_cast<int>(std::lround(6 + 72 * qrho));
    int j = 2 * n + 1;
    double xsum = 1.0 / j, ysum = 0.0;
    for (int i = n; i >= 1; --i) {
      j -= 2;
      double xaux = (xsum * xquad - ysum * yquad) / i;
      ysum = (xsum * yquad + ysum * xquad) / i;
      xsum = xaux + 1.0 / j;
    }
    double u1 = -kFactor * (xsum * yabs + ysum * xabs) + 1.0;
    double v1 = kFactor * (xsum * xabs - ysum * yabs);
    double daux = std::exp(-xquad);
    r.u2 = daux * std::cos(yquad);
    r.v2 = -daux * std::sin(yquad);
    r.u = u1 * r.u2 - v1 * r.v2;
    r.v = u1 * r.v2 + v1 * r.u2;
    r.series = true;
    return r;
  }
  double h = 0, h2 = 0;
  int kapn = 0, nu = 0;
  if (qrho > 1) {
    qrho = std::sqrt(qrho);
    nu = static_cast<int>(3 + (1442 / (26 * qrho + 77)));
  } else {
    qrho = (1 - y) * std::sqrt(1 - qrho);
    h = 1.88 * qrho;
    h2 = 2 * h;
    kapn = static_cast<int>(std::lround(7 + 34 * qrho));
    nu = static_cast<int>(std::lround(16 + 26 * qrho));
  }
  bool b = h > 0;
  double qlambda = b ? std::pow(h2, kapn) : 0.0;
  double rx = 0, ry = 0, sx = 0, sy = 0;
  for (int n = nu; n >= 0; --n) {
    int np1 = n + 1;
    double tx = yabs + h + np1 * rx;
    double ty = xabs - np1 * ry;
    double c = 0.5 / (tx * tx + ty * ty);
    rx = c * tx;
    ry = c * ty;
    if (b && n <= kapn) {
      tx = qlambda + sx;
      sx = rx * tx - ry * sy;
      sy = ry * tx + rx * sy;
      qlambda /= h2;
    }
  }
  if (h == 0) {
    r.u = kFactor * rx;
    r.v = kFactor * ry;
  } else {
    r.u = kFactor * sx;
    r.v = kFactor * sy;
  }
  if (yabs == 0) r.u = std::exp(-xabs * xabs);
  return r;
}

}  // namespace

LogComplex log_sum(const std::vector<LogComplex>& terms) {
  double mx = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) mx = std::max(mx, t.log_abs);
  if (!std::isfinite(mx)) return {};
  Complex s = 0;
  for (const auto& t : terms) s += std::polar(std::exp(t.log_abs - mx), t.arg);
  return {std::log(std::abs(s)) + mx, std::arg(s)};
}

LogComplex faddeeva_log_upper(Complex z) {
  if (z.imag() < 0) throw ConfigError("faddeeva_log_upper needs Im z >= 0");
  Wofz r = wofz_first_quadrant(std::abs(z.real()), z.imag());
  double v = z.real() < 0 ? -r.v : r.v;
  Complex w(r.u, v);
  return to_log(w);
}

Complex faddeeva(Complex z) {
  double xi = z.real(), yi = z.imag();
  double xabs = std::abs(xi), yabs = std::abs(yi);
  Wofz r = wofz_first_quadrant(xabs, yabs);
  double u = r.u, v = r.v;
  if (yi < 0) {
    double u2, v2;
    if (r.series) {
      u2 = 2 * r.u2;
      v2 = 2 * r.v2;
    } else {
      double xquad = -(xabs * xabs - yabs * yabs);
      double yquad = 2 * xabs * yabs;
      double w1 = 2 * std::exp(xquad);
      u2 = w1 * std::cos(yquad);
      v2 = -w1 * std::sin(yquad);
    }
    u = u2 - u;
    v = v2 - v;
    if (xi > 0) v = -v;
  } else if (xi < 0) {
    v = -v;
  }
  return {u, v};
}

}  // namespace cglab
