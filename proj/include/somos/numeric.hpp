#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>

namespace somos {

using Real = long double;
using Complex = std::complex<Real>;

inline constexpr Real kPi = std::numbers::pi_v<Real>;

/// Working-precision context for every series and iteration in the
/// numerical modules. `epsilon` is the relative size below which a series
/// term is dropped; it cannot be finer than the unit roundoff of Real.
struct Precision {
  Real epsilon = std::numeric_limits<Real>::epsilon();
  std::size_t max_terms = 10000;

  /// Precision for roughly `digits` correct decimal digits, clamped to
  /// what Real can represent.
  static Precision from_digits(int digits);
  int digits() const;
};

inline bool is_finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// |a - b| / max(|a|, |b|, floor).
inline Real relative_difference(const Complex& a, const Complex& b, Real floor = 1.0L) {
  const Real scale = std::max({std::abs(a), std::abs(b), floor});
  return std::abs(a - b) / scale;
}

}  // namespace somos
