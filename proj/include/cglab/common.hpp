#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace cglab {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

// bad parameters, unknown keys, missing callables
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// e.g. negative Laplacian on the droplet
class ModelViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// log-modulus + argument; for weighted values that over/underflow as doubles
struct LogComplex {
  double log_abs = -std::numeric_limits<double>::infinity();
  double arg = 0.0;

  Complex value() const { return std::polar(std::exp(log_abs), arg); }
  double abs() const { return std::exp(log_abs); }
};

inline LogComplex to_log(Complex z) {
  return {std::log(std::abs(z)), std::arg(z)};
}

inline LogComplex operator*(LogComplex a, LogComplex b) {
  return {a.log_abs + b.log_abs, a.arg + b.arg};
}

LogComplex log_sum(const std::vector<LogComplex>& terms);

// area under dA = dxdy/pi
inline double disc_area(double r) { return r * r; }

}  // namespace cglab
