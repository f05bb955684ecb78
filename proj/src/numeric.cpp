#include "somos/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace somos {

Precision Precision::from_digits(int digits) {
  Precision p;
  p.epsilon = std::max(std::pow(10.0L, -static_cast<Real>(digits)), std::numeric_limits<Real>::epsilon());
  return p;
}

int Precision::digits() const { return static_cast<int>(std::floor(-std::log10(epsilon))); }

}  // namespace somos
