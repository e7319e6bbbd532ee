#pragma once

#include "cglab/common.hpp"

namespace cglab {

// Faddeeva function w(z) = exp(-z^2) erfc(-iz), Poppe-Wijers algorithm
Complex faddeeva(Complex z);

// w(z) for Im z >= 0 together with log|w| and arg w, no overflow
LogComplex faddeeva_log_upper(Complex z);

}  // namespace cglab
