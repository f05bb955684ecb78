#pragma once

#include <array>
#include <optional>
#include <utility>

#include "somos/numeric.hpp"
#include "somos/rational.hpp"

// Weierstrass elliptic functions for the curve y^2 = 4x^3 - g2 x - g3.
//
// Conventions: the lattice is 2*omega1*Z + 2*omega2*Z with
// Im(omega2/omega1) > 0, nome q = exp(i*pi*omega2/omega1), eta_k = zeta(omega_k),
// and eta1*omega2 - eta2*omega1 = i*pi/2. When g2, g3 are real with three
// real roots e1 > e2 > e3, omega1 is real and omega2 purely imaginary.
//
// sigma, zeta, wp and wp' are evaluated from the sine-product / q-series in
// the centred fundamental cell; arguments outside it are brought back with
// the exact (quasi-)periodicity relations.
namespace somos::weierstrass {

struct CurveInvariants {
  Complex g2;
  Complex g3;
  // Exact values, kept when the invariants are known rationals.
  std::optional<Rational> g2_exact;
  std::optional<Rational> g3_exact;

  CurveInvariants(Complex g2_value, Complex g3_value) : g2(g2_value), g3(g3_value) {}
  static CurveInvariants exact(const Rational& g2_value, const Rational& g3_value);

  /// g2^3 - 27 g3^2
  Complex discriminant() const;
  std::optional<Rational> discriminant_exact() const;
  /// 1728 g2^3 / (g2^3 - 27 g3^2)
  Complex j_invariant() const;
  std::optional<Rational> j_invariant_exact() const;
  bool is_real() const { return g2.imag() == 0 && g3.imag() == 0; }
};

/// Roots of 4x^3 - g2 x - g3. Real coefficients with three real roots come
/// back as e1 > e2 > e3; with one real root it is listed first, followed by
/// the conjugate pair (positive imaginary part first). Otherwise the roots
/// are ordered by decreasing real part.
std::array<Complex, 3> curve_roots(const CurveInvariants& inv, const Precision& prec = {});

class Lattice {
 public:
  Complex omega1() const { return omega1_; }
  Complex omega2() const { return omega2_; }
  Complex eta1() const { return eta1_; }
  Complex eta2() const { return eta2_; }
  Complex q() const { return q_; }
  const std::array<Complex, 3>& roots() const { return roots_; }
  const CurveInvariants& invariants() const { return inv_; }
  const Precision& precision() const { return prec_; }
  Complex g2() const { return inv_.g2; }
  Complex g3() const { return inv_.g3; }

 private:
  friend Lattice lattice_from_invariants(const CurveInvariants&, const Precision&);
  friend Lattice scale_lattice(const Lattice&, Complex);
  Lattice(CurveInvariants inv, Precision prec) : inv_(std::move(inv)), prec_(prec) {}

  CurveInvariants inv_;
  Precision prec_;
  Complex omega1_, omega2_, eta1_, eta2_, q_;
  std::array<Complex, 3> roots_{};
};

/// Periods from arithmetic-geometric means of root differences, eta1 and
/// the nome from their q-series, validated by recomputing (g2, g3) from
/// the Eisenstein series. Throws DegenerateCurve or PrecisionLoss.
Lattice lattice_from_invariants(const CurveInvariants& inv, const Precision& prec = {});

/// (g2, g3) recomputed from the lattice via the Eisenstein q-series.
std::pair<Complex, Complex> eisenstein_invariants(const Lattice& lat);

/// Real coordinates (a, b) with z = 2a*omega1 + 2b*omega2.
std::pair<Real, Real> lattice_coordinates(Complex z, const Lattice& lat);

/// Representative of z modulo the lattice with coordinates in [0,1) x [0,1).
Complex reduce_to_cell(Complex z, const Lattice& lat);

/// Representative with coordinates in [-1/2, 1/2) x [-1/2, 1/2).
Complex centered_representative(Complex z, const Lattice& lat);

Complex wp(Complex z, const Lattice& lat);
Complex wp_prime(Complex z, const Lattice& lat);
/// 6 wp^2 - g2/2
Complex wp_second(Complex z, const Lattice& lat);
Complex zeta_w(Complex z, const Lattice& lat);
Complex sigma(Complex z, const Lattice& lat);
/// A logarithm of sigma(z) (imaginary part defined modulo 2*pi); finite for
/// arguments far outside the cell where sigma itself would overflow.
Complex log_sigma(Complex z, const Lattice& lat);

struct WpPair {
  Complex p;
  Complex dp;
};
WpPair wp_and_prime(Complex z, const Lattice& lat);

/// Carlson's symmetric integral R_F(x, y, z) by the duplication algorithm.
/// Arguments must avoid the closed negative real axis, at most one may be zero.
Complex carlson_rf(Complex x, Complex y, Complex z, const Precision& prec = {});

/// Some z with wp(z) = x, computed as R_F(x - e1, x - e2, x - e3) and
/// returned as reduce_to_cell(z). The sign of z is not fixed (wp is even);
/// callers pick it from wp'(z).
Complex inverse_wp(Complex x, const Lattice& lat);
Complex inverse_wp(Complex x, const CurveInvariants& inv, const Precision& prec = {});

/// (mu^4 g2, mu^6 g3). The exact shadow survives when mu^4 and mu^6 are
/// rational, i.e. when supplied.
CurveInvariants scale_invariants(const CurveInvariants& inv, Complex mu);
CurveInvariants scale_invariants(const CurveInvariants& inv, const Rational& mu4, const Rational& mu6);

/// Lattice of the curve (mu^4 g2, mu^6 g3): periods divided by mu.
Lattice scale_lattice(const Lattice& lat, Complex mu);

// ---------------------------------------------------------------------------
// Identity residuals. `value` is left side minus right side, `scale` the
// magnitude used to make it relative.

struct Residual {
  Complex value;
  Real scale;
  Real relative() const { return std::abs(value) / std::max(scale, Real(1e-300L)); }
};

/// sigma(z+k)sigma(z-k)/(sigma(z)^2 sigma(k)^2) - (wp(k) - wp(z))
Residual addition_formula_residual(Complex z, Complex kappa, const Lattice& lat);

/// sigma(c+d)sigma(c-d)sigma(a+b)sigma(a-b) - sigma(b+d)sigma(b-d)sigma(a+c)sigma(a-c)
///   + sigma(b+c)sigma(b-c)sigma(a+d)sigma(a-d)
Residual three_term_residual(Complex a, Complex b, Complex c, Complex d, const Lattice& lat);

/// wp(2z) against 1/4 (wp''/wp')^2 - 2 wp(z).
Residual duplication_residual(Complex z, const Lattice& lat);

/// wp(z; g) - mu^-2 wp(z/mu; mu^4 g) and sigma(z; g) - mu sigma(z/mu; mu^4 g).
std::pair<Residual, Residual> scaling_residuals(Complex z, Complex mu, const Lattice& lat);

/// wp'(k)^2 - sigma(2k)^2/sigma(k)^8 and
/// wp'(k)^2 (wp(2k) - wp(k)) + sigma(3k)/sigma(k)^9.
std::pair<Residual, Residual> eds_identity_residuals(Complex kappa, const Lattice& lat);

/// wp'(k)^4 + wp''(k) wp'(k)^2 (wp(2k) - wp(k)) + sigma(4k)/(sigma(2k) sigma(k)^12).
Residual quartic_identity_residual(Complex kappa, const Lattice& lat);

/// wp'(z)^2 - (4 wp^3 - g2 wp - g3).
Residual differential_equation_residual(Complex z, const Lattice& lat);

}  // namespace somos::weierstrass
