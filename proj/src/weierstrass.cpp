#include "somos/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "somos/errors.hpp"

namespace somos::weierstrass {

namespace {

constexpr Complex kI{0.0L, 1.0L};

Real tiny() { return std::numeric_limits<Real>::min(); }

Complex polish_root(Complex x, const Complex& g2, const Complex& g3) {
  for (int i = 0; i < 4; ++i) {
    const Complex f = 4.0L * x * x * x - g2 * x - g3;
    const Complex df = 12.0L * x * x - g2;
    if (std::abs(df) == 0) break;
    const Complex next = x - f / df;
    if (std::abs(4.0L * next * next * next - g2 * next - g3) >= std::abs(f)) break;
    x = next;
  }
  return x;
}

// Exact value of a finite long double.
Rational exact_from_real(Real v) {
  int exponent = 0;
  const Real mantissa = std::frexp(std::fabs(v), &exponent);
  const auto digits = static_cast<unsigned long>(std::ldexp(mantissa, 64));
  BigInt num = BigInt(static_cast<unsigned long>(digits >> 32)) << 32;
  num += static_cast<unsigned long>(digits & 0xffffffffUL);
  Rational r(num, 1);
  exponent -= 64;
  if (exponent >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(exponent));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-exponent));
  }
  return v < 0 ? Rational(-r) : r;
}

// Newton on a real root in exact arithmetic, truncated to a 256-bit dyadic
// grid each step. Near-coincident roots make any long double residual useless.
Rational refine_real_root(Real x, const Rational& g2, const Rational& g3) {
  constexpr mp_bitcnt_t kBits = 256;
  Rational xr = exact_from_real(x);
  for (int i = 0; i < 6; ++i) {
    const Rational f = 4 * xr * xr * xr - g2 * xr - g3;
    const Rational df = 12 * xr * xr - g2;
    if (f == 0 || df == 0) break;
    Rational next = xr - f / df;
    mpq_mul_2exp(next.get_mpq_t(), next.get_mpq_t(), kBits);
    BigInt grid;
    mpz_fdiv_q(grid.get_mpz_t(), next.get_num_mpz_t(), next.get_den_mpz_t());
    next = Rational(grid, 1);
    mpq_div_2exp(next.get_mpq_t(), next.get_mpq_t(), kBits);
    if (next == xr) break;
    xr = next;
  }
  return xr;
}

// Arithmetic-geometric mean with the "optimal" square root at every step
// (|a - b| <= |a + b|); this is the choice that yields the periods.
Complex agm(Complex a, Complex b, const Precision& prec) {
  if (std::abs(a - b) > std::abs(a + b)) b = -b;
  for (std::size_t i = 0; i < 200; ++i) {
    if (std::abs(a - b) <= 4 * prec.epsilon * std::abs(a)) return a;
    Complex a1 = (a + b) / 2.0L;
    Complex b1 = std::sqrt(a * b);
    if (std::abs(a1 - b1) > std::abs(a1 + b1)) b1 = -b1;
    a = a1;
    b = b1;
  }
  throw Error(ErrorKind::PrecisionLoss, "arithmetic-geometric mean did not converge");
}

Complex half_period_for_root(const std::array<Complex, 3>& e, int k, const Precision& prec) {
  const int i = (k + 1) % 3;
  const int j = (k + 2) % 3;
  const Complex m = agm(std::sqrt(e[k] - e[i]), std::sqrt(e[k] - e[j]), prec);
  if (std::abs(m) == 0) throw Error(ErrorKind::DegenerateCurve, "coincident roots");
  return kPi / (2.0L * m);
}

// Shared q-series data for evaluation at a reduced argument.
struct Reduced {
  Complex zr;  // representative in the centred cell
  long long m = 0;
  long long n = 0;
};

Reduced reduce_centered(Complex z, const Lattice& lat) {
  auto [a, b] = lattice_coordinates(z, lat);
  Reduced r;
  r.m = std::llround(std::floor(a + 0.5L));
  r.n = std::llround(std::floor(b + 0.5L));
  r.zr = z - 2.0L * static_cast<Real>(r.m) * lat.omega1() - 2.0L * static_cast<Real>(r.n) * lat.omega2();
  return r;
}

void check_truncation(std::size_t k, const Precision& prec) {
  if (k >= prec.max_terms) throw Error(ErrorKind::PrecisionLoss, "q-series hit the term cap");
}

bool at_lattice_point(const Complex& zr, const Lattice& lat) {
  const Real size = std::min(std::abs(lat.omega1()), std::abs(lat.omega2()));
  return std::abs(zr) <= 8 * lat.precision().epsilon * size;
}

// Derivatives (orders 0..3) of the w-dependent part
// L(w) = log sin w + sum_n [log(1 - q^2n e^{2iw}) + log(1 - q^2n e^{-2iw})],
// with w = pi z / (2 omega1). Order 0 is the logarithm itself.
struct SeriesTerms {
  Complex l0, l1, l2, l3;
};

SeriesTerms series_terms(const Complex& zr, const Lattice& lat, int max_order) {
  const Precision& prec = lat.precision();
  const Complex w = kPi * zr / (2.0L * lat.omega1());
  const Complex s = std::sin(w);
  const Complex c = std::cos(w);
  SeriesTerms t;
  if (max_order == 0) t.l0 = std::log(s);
  const Complex cot = c / s;
  const Complex csc2 = 1.0L / (s * s);
  t.l1 = cot;
  t.l2 = -csc2;
  t.l3 = 2.0L * csc2 * cot;
  const Complex e_plus = std::exp(2.0L * kI * w);
  const Complex e_minus = std::exp(-2.0L * kI * w);
  const Complex q2 = lat.q() * lat.q();
  Complex q2n = 1.0L;
  for (std::size_t k = 1;; ++k) {
    check_truncation(k, prec);
    q2n *= q2;
    const Complex x = q2n * e_plus;
    const Complex y = q2n * e_minus;
    const Complex ox = 1.0L - x;
    const Complex oy = 1.0L - y;
    Real size = 0;
    if (max_order == 0) {
      const Complex term = std::log(ox) + std::log(oy);
      t.l0 += term;
      size = std::abs(term);
    }
    if (max_order >= 1) {
      const Complex term = -2.0L * kI * x / ox + 2.0L * kI * y / oy;
      t.l1 += term;
      size = std::max(size, std::abs(term) / std::max(std::abs(t.l1), Real(1)));
    }
    if (max_order >= 2) {
      const Complex term = 4.0L * x / (ox * ox) + 4.0L * y / (oy * oy);
      t.l2 += term;
      size = std::max(size, std::abs(term) / std::max(std::abs(t.l2), Real(1)));
    }
    if (max_order >= 3) {
      const Complex term = 8.0L * kI * x * (1.0L + x) / (ox * ox * ox) - 8.0L * kI * y * (1.0L + y) / (oy * oy * oy);
      t.l3 += term;
      size = std::max(size, std::abs(term) / std::max(std::abs(t.l3), Real(1)));
    }
    if (size <= prec.epsilon * 0.25L && std::abs(q2n) <= prec.epsilon) break;
  }
  return t;
}

// sum over n of log(1 - q^2n): the constant part of log sigma's product.
Complex log_product_normalizer(const Lattice& lat) {
  const Complex q2 = lat.q() * lat.q();
  Complex q2n = 1.0L;
  Complex acc = 0.0L;
  for (std::size_t k = 1;; ++k) {
    check_truncation(k, lat.precision());
    q2n *= q2;
    acc += std::log(1.0L - q2n);
    if (std::abs(q2n) <= lat.precision().epsilon * 0.25L) break;
  }
  return acc;
}

Complex eta1_series(Complex omega1, Complex q, const Precision& prec) {
  const Complex q2 = q * q;
  Complex q2n = 1.0L;
  Complex acc = 0.0L;
  for (std::size_t k = 1;; ++k) {
    check_truncation(k, prec);
    q2n *= q2;
    const Complex d = 1.0L - q2n;
    const Complex term = q2n / (d * d);
    acc += term;
    if (std::abs(term) <= prec.epsilon * 0.25L) break;
  }
  return kPi * kPi / (12.0L * omega1) * (1.0L - 24.0L * acc);
}

std::pair<Complex, Complex> eisenstein(Complex omega1, Complex q, const Precision& prec) {
  const Complex q2 = q * q;
  Complex q2n = 1.0L;
  Complex s3 = 0.0L;
  Complex s5 = 0.0L;
  for (std::size_t k = 1;; ++k) {
    check_truncation(k, prec);
    q2n *= q2;
    const Real n = static_cast<Real>(k);
    const Complex base = q2n / (1.0L - q2n);
    const Complex t3 = n * n * n * base;
    const Complex t5 = n * n * t3;
    s3 += t3;
    s5 += t5;
    if (std::abs(t5) <= prec.epsilon * 0.25L * std::max(Real(1), std::abs(s5))) break;
  }
  const Complex c = kPi / (2.0L * omega1);
  const Complex c2 = c * c;
  const Complex c4 = c2 * c2;
  return {4.0L / 3.0L * c4 * (1.0L + 240.0L * s3), 8.0L / 27.0L * c4 * c2 * (1.0L - 504.0L * s5)};
}

Real invariant_error(const CurveInvariants& inv, const std::pair<Complex, Complex>& g) {
  const Real a2 = std::abs(inv.g2);
  const Real a3 = std::abs(inv.g3);
  const Real s2 = std::max({a2, std::pow(a3, 2.0L / 3.0L), tiny()});
  const Real s3 = std::max({a3, std::pow(a2, 1.5L), tiny()});
  return std::max(std::abs(g.first - inv.g2) / s2, std::abs(g.second - inv.g3) / s3);
}

// One real root: the lattice is rhombic. Among small combinations of the
// basis (a, b) take the shortest real vector as omega1 and the shortest
// vector completing it to a basis as omega2.
std::pair<Complex, Complex> real_rhombic_basis(Complex a, Complex b) {
  constexpr int kReach = 3;
  const Real scale = std::max(std::abs(a), std::abs(b));
  Complex w1 = 0;
  int m1 = 0, n1 = 0;
  for (int m = -kReach; m <= kReach; ++m) {
    for (int n = -kReach; n <= kReach; ++n) {
      const Complex v = static_cast<Real>(m) * a + static_cast<Real>(n) * b;
      if (std::abs(v) <= 1e-9L * scale || std::abs(v.imag()) > 1e-9L * std::abs(v)) continue;
      if (std::abs(w1) == 0 || std::abs(v) < std::abs(w1) - 1e-12L * scale) {
        w1 = v;
        m1 = m;
        n1 = n;
      }
    }
  }
  if (std::abs(w1) == 0) throw Error(ErrorKind::PrecisionLoss, "no real period found");
  Complex w2 = 0;
  for (int m = -kReach; m <= kReach; ++m) {
    for (int n = -kReach; n <= kReach; ++n) {
      if (std::abs(m1 * n - n1 * m) != 1) continue;
      const Complex v = static_cast<Real>(m) * a + static_cast<Real>(n) * b;
      if (std::abs(w2) == 0 || std::abs(v) < std::abs(w2) - 1e-12L * scale) w2 = v;
    }
  }
  w1 = Complex(std::abs(w1.real()), 0);
  if ((w2 / w1).imag() < 0) w2 = -w2;
  return {w1, w2};
}

// Moves tau = omega2/omega1 towards the standard fundamental domain.
void reduce_basis(Complex& omega1, Complex& omega2, bool allow_inversion) {
  for (int iter = 0; iter < 64; ++iter) {
    Complex tau = omega2 / omega1;
    const Real shift = std::abs(tau.real()) > 0.5L + 1e-9L ? std::round(tau.real()) : 0.0L;
    if (shift != 0) {
      omega2 -= shift * omega1;
      tau = omega2 / omega1;
    }
    if (!allow_inversion || std::abs(tau) >= 1.0L - 1e-12L) return;
    const Complex old1 = omega1;
    omega1 = omega2;
    omega2 = -old1;
  }
}

Complex log_sigma_reduced(const Reduced& r, const Lattice& lat, const Complex& normalizer) {
  if (at_lattice_point(r.zr, lat)) throw Error(ErrorKind::PoleAtLatticePoint, "log sigma at a lattice point");
  const Complex w1 = lat.omega1();
  const SeriesTerms t = series_terms(r.zr, lat, 0);
  Complex value = std::log(2.0L * w1 / kPi) + lat.eta1() * r.zr * r.zr / (2.0L * w1) + t.l0 - 2.0L * normalizer;
  if (r.m != 0 || r.n != 0) {
    const Real m = static_cast<Real>(r.m);
    const Real n = static_cast<Real>(r.n);
    const Complex h = 2.0L * m * lat.eta1() + 2.0L * n * lat.eta2();
    const Complex half = m * lat.omega1() + n * lat.omega2();
    value += h * (r.zr + half);
    const long long parity = (r.m + r.n + r.m * r.n) & 1LL;
    if (parity != 0) value += kI * kPi;
  }
  return value;
}

}  // namespace

CurveInvariants CurveInvariants::exact(const Rational& g2_value, const Rational& g3_value) {
  CurveInvariants inv(Complex(to_real(g2_value)), Complex(to_real(g3_value)));
  inv.g2_exact = g2_value;
  inv.g3_exact = g3_value;
  return inv;
}

Complex CurveInvariants::discriminant() const { return g2 * g2 * g2 - 27.0L * g3 * g3; }

std::optional<Rational> CurveInvariants::discriminant_exact() const {
  if (!g2_exact || !g3_exact) return std::nullopt;
  return Rational(*g2_exact * *g2_exact * *g2_exact - 27 * *g3_exact * *g3_exact);
}

Complex CurveInvariants::j_invariant() const { return 1728.0L * g2 * g2 * g2 / discriminant(); }

std::optional<Rational> CurveInvariants::j_invariant_exact() const {
  auto d = discriminant_exact();
  if (!d || *d == 0) return std::nullopt;
  return Rational(1728 * *g2_exact * *g2_exact * *g2_exact / *d);
}

std::array<Complex, 3> curve_roots(const CurveInvariants& inv, const Precision& prec) {
  (void)prec;
  const bool degenerate = inv.discriminant_exact()
                              ? *inv.discriminant_exact() == 0
                              : std::abs(inv.discriminant()) <=
                                    64 * std::numeric_limits<Real>::epsilon() *
                                        std::max({std::pow(std::abs(inv.g2), 3.0L), 27 * std::norm(inv.g3), tiny()});
  if (degenerate) throw Error(ErrorKind::DegenerateCurve, "discriminant g2^3 - 27 g3^2 vanishes");

  // Depressed cubic x^3 + p x + r = 0.
  const Complex p = -inv.g2 / 4.0L;
  const Complex r = -inv.g3 / 4.0L;
  const Complex disc = std::sqrt(r * r / 4.0L + p * p * p / 27.0L);
  Complex u3 = -r / 2.0L + disc;
  if (std::abs(-r / 2.0L - disc) > std::abs(u3)) u3 = -r / 2.0L - disc;
  const Complex u = std::pow(u3, 1.0L / 3.0L);
  const Complex unity(-0.5L, std::sqrt(3.0L) / 2.0L);
  std::array<Complex, 3> roots;
  Complex uk = u;
  for (auto& root : roots) {
    root = (std::abs(uk) == 0) ? Complex(0) : uk - p / (3.0L * uk);
    root = polish_root(root, inv.g2, inv.g3);
    uk *= unity;
  }

  if (inv.is_real()) {
    const Real d = inv.discriminant().real();
    if (d > 0) {
      for (auto& root : roots) root = Complex(root.real(), 0);
      if (inv.g2_exact && inv.g3_exact) {
        for (auto& root : roots) root = Complex(to_real(refine_real_root(root.real(), *inv.g2_exact, *inv.g3_exact)), 0);
      }
      std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) { return a.real() > b.real(); });
    } else if (inv.g2_exact && inv.g3_exact) {
      std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) { return std::abs(a.imag()) < std::abs(b.imag()); });
      const Rational e1r = refine_real_root(roots[0].real(), *inv.g2_exact, *inv.g3_exact);
      const Real e1 = to_real(e1r);
      // Remaining pair solves x^2 + e1 x + e1^2 - g2/4 = 0.
      const Rational im2 = (3 * e1r * e1r - *inv.g2_exact) / 4;
      const Complex upper(-e1 / 2.0L, std::sqrt(std::fabs(to_real(im2))));
      roots = {Complex(e1, 0), upper, std::conj(upper)};
    } else {
      std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) { return std::abs(a.imag()) < std::abs(b.imag()); });
      const Complex real_root(roots[0].real(), 0);
      Complex upper = roots[1].imag() >= roots[2].imag() ? roots[1] : roots[2];
      // Enforce exact conjugacy and the zero-sum constraint.
      upper = Complex(-real_root.real() / 2.0L, std::abs(upper.imag()));
      upper = polish_root(upper, inv.g2, inv.g3);
      roots = {real_root, upper, std::conj(upper)};
    }
  } else {
    std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
      return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
    });
  }
  return roots;
}

Lattice lattice_from_invariants(const CurveInvariants& inv, const Precision& prec) {
  Lattice lat(inv, prec);
  lat.roots_ = curve_roots(inv, prec);
  const auto& e = lat.roots_;
  std::array<Complex, 3> half;
  for (int k = 0; k < 3; ++k) half[k] = half_period_for_root(e, k, prec);

  Complex w1, w2;
  if (inv.is_real() && inv.discriminant().real() > 0) {
    w1 = Complex(std::abs(half[0]), 0);
    w2 = Complex(0, std::abs(half[2]));
  } else if (inv.is_real()) {
    std::tie(w1, w2) = real_rhombic_basis(half[0], half[1]);
  } else {
    int smallest = 0;
    for (int k = 1; k < 3; ++k) {
      if (std::abs(half[k]) < std::abs(half[smallest])) smallest = k;
    }
    w1 = half[smallest];
    Real best = -1;
    for (int k = 0; k < 3; ++k) {
      if (k == smallest) continue;
      Complex cand = half[k];
      if ((cand / w1).imag() < 0) cand = -cand;
      if ((cand / w1).imag() > best) {
        best = (cand / w1).imag();
        w2 = cand;
      }
    }
  }
  if ((w2 / w1).imag() <= 0) throw Error(ErrorKind::DegenerateCurve, "periods are collinear");

  const bool keep_real_basis = inv.is_real() && (w2 / w1).imag() >= 0.25L;
  reduce_basis(w1, w2, !keep_real_basis);

  lat.omega1_ = w1;
  lat.omega2_ = w2;
  lat.q_ = std::exp(kI * kPi * (w2 / w1));
  if (std::abs(lat.q_) > 0.999L) throw Error(ErrorKind::PrecisionLoss, "nome too close to the unit circle");
  if (inv.is_real() && inv.discriminant().real() > 0) lat.q_ = Complex(lat.q_.real(), 0);
  lat.eta1_ = eta1_series(w1, lat.q_, prec);
  lat.eta2_ = (lat.eta1_ * w2 - kI * kPi / 2.0L) / w1;

  const auto g = eisenstein(w1, lat.q_, prec);
  const Real err = invariant_error(inv, g);
  if (!(err <= 1e-10L)) {
    throw Error(ErrorKind::PrecisionLoss, "period lattice does not reproduce the invariants (relative error " +
                                              std::to_string(static_cast<double>(err)) + ")");
  }
  return lat;
}

std::pair<Complex, Complex> eisenstein_invariants(const Lattice& lat) {
  return eisenstein(lat.omega1(), lat.q(), lat.precision());
}

std::pair<Real, Real> lattice_coordinates(Complex z, const Lattice& lat) {
  const Complex p1 = 2.0L * lat.omega1();
  const Complex p2 = 2.0L * lat.omega2();
  const Real det = p1.real() * p2.imag() - p2.real() * p1.imag();
  const Real a = (z.real() * p2.imag() - p2.real() * z.imag()) / det;
  const Real b = (p1.real() * z.imag() - z.real() * p1.imag()) / det;
  return {a, b};
}

Complex reduce_to_cell(Complex z, const Lattice& lat) {
  auto [a, b] = lattice_coordinates(z, lat);
  const Real m = std::floor(a);
  const Real n = std::floor(b);
  return z - 2.0L * m * lat.omega1() - 2.0L * n * lat.omega2();
}

Complex centered_representative(Complex z, const Lattice& lat) { return reduce_centered(z, lat).zr; }

WpPair wp_and_prime(Complex z, const Lattice& lat) {
  const Reduced r = reduce_centered(z, lat);
  if (at_lattice_point(r.zr, lat)) throw Error(ErrorKind::PoleAtLatticePoint, "wp has a pole at lattice points");
  const SeriesTerms t = series_terms(r.zr, lat, 3);
  const Complex c = kPi / (2.0L * lat.omega1());
  return {-lat.eta1() / lat.omega1() - c * c * t.l2, -c * c * c * t.l3};
}

Complex wp(Complex z, const Lattice& lat) { return wp_and_prime(z, lat).p; }

Complex wp_prime(Complex z, const Lattice& lat) { return wp_and_prime(z, lat).dp; }

Complex wp_second(Complex z, const Lattice& lat) {
  const Complex p = wp(z, lat);
  return 6.0L * p * p - lat.g2() / 2.0L;
}

Complex zeta_w(Complex z, const Lattice& lat) {
  const Reduced r = reduce_centered(z, lat);
  if (at_lattice_point(r.zr, lat)) throw Error(ErrorKind::PoleAtLatticePoint, "zeta has a pole at lattice points");
  const SeriesTerms t = series_terms(r.zr, lat, 1);
  const Complex c = kPi / (2.0L * lat.omega1());
  Complex value = lat.eta1() * r.zr / lat.omega1() + c * t.l1;
  value += 2.0L * static_cast<Real>(r.m) * lat.eta1() + 2.0L * static_cast<Real>(r.n) * lat.eta2();
  return value;
}

Complex log_sigma(Complex z, const Lattice& lat) {
  return log_sigma_reduced(reduce_centered(z, lat), lat, log_product_normalizer(lat));
}

Complex sigma(Complex z, const Lattice& lat) {
  const Reduced r = reduce_centered(z, lat);
  if (at_lattice_point(r.zr, lat)) return 0.0L;
  const Complex value = std::exp(log_sigma_reduced(r, lat, log_product_normalizer(lat)));
  if (!is_finite(value)) throw Error(ErrorKind::Overflow, "sigma overflows; use log_sigma");
  return value;
}

Complex carlson_rf(Complex x, Complex y, Complex z, const Precision& prec) {
  int zeros = (std::abs(x) == 0) + (std::abs(y) == 0) + (std::abs(z) == 0);
  if (zeros > 1) throw Error(ErrorKind::InvalidArgument, "R_F needs at most one zero argument");
  const Complex a0 = (x + y + z) / 3.0L;
  const Real r = std::max(prec.epsilon, std::numeric_limits<Real>::epsilon());
  Real q_bound = std::pow(3.0L * r, -1.0L / 6.0L) *
                 std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  Complex a = a0;
  Real four_m = 1;
  for (int iter = 0; iter < 200 && q_bound >= std::abs(a) * four_m; ++iter) {
    const Complex sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const Complex lambda = sx * sy + sx * sz + sy * sz;
    x = (x + lambda) / 4.0L;
    y = (y + lambda) / 4.0L;
    z = (z + lambda) / 4.0L;
    a = (a + lambda) / 4.0L;
    four_m *= 4;
  }
  // (a - x) equals (a0 - x0) / 4^m exactly, so this is Carlson's X.
  const Complex X = (a - x) / a;
  const Complex Y = (a - y) / a;
  const Complex Z = -X - Y;
  const Complex e2 = X * Y - Z * Z;
  const Complex e3 = X * Y * Z;
  const Complex series = 1.0L - e2 / 10.0L + e3 / 14.0L + e2 * e2 / 24.0L - 3.0L * e2 * e3 / 44.0L -
                         5.0L * e2 * e2 * e2 / 208.0L + 3.0L * e3 * e3 / 104.0L + e2 * e2 * e3 / 16.0L;
  return series / std::sqrt(a);
}

Complex inverse_wp(Complex x, const Lattice& lat) {
  const auto& e = lat.roots();
  const std::array<Complex, 3> d{x - e[0], x - e[1], x - e[2]};
  // Rotate all three arguments off the negative real axis; R_F is homogeneous
  // of degree -1/2, so R_F(d) = l^(1/2) R_F(l d) with |l| = 1.
  Real best_margin = -1;
  Real best_angle = 0;
  for (int k = 0; k < 16; ++k) {
    const Real angle = (k % 2 == 0 ? 1 : -1) * kPi * static_cast<Real>((k + 1) / 2) / 16.0L;
    Real margin = kPi;
    for (const auto& di : d) {
      if (std::abs(di) == 0) continue;
      const Real arg = std::arg(di * std::polar(1.0L, angle));
      margin = std::min(margin, kPi - std::abs(arg));
    }
    if (margin > best_margin + 1e-6L) {
      best_margin = margin;
      best_angle = angle;
    }
  }
  const Complex rot = std::polar(1.0L, best_angle);
  Complex z = std::polar(1.0L, best_angle / 2.0L) * carlson_rf(rot * d[0], rot * d[1], rot * d[2], lat.precision());

  auto residual = [&](const Complex& zz) { return std::abs(wp(zz, lat) - x); };
  Real res = residual(z);
  for (int iter = 0; iter < 4 && res > 0; ++iter) {
    const WpPair v = wp_and_prime(z, lat);
    if (std::abs(v.dp) == 0) break;
    const Complex next = z - (v.p - x) / v.dp;
    const Real next_res = residual(next);
    if (!(next_res < res)) break;
    z = next;
    res = next_res;
  }
  if (!(res <= 1e-9L * std::max(Real(1), std::abs(x)))) {
    throw Error(ErrorKind::PrecisionLoss, "inverse wp residual too large");
  }
  return reduce_to_cell(z, lat);
}

Complex inverse_wp(Complex x, const CurveInvariants& inv, const Precision& prec) {
  return inverse_wp(x, lattice_from_invariants(inv, prec));
}

CurveInvariants scale_invariants(const CurveInvariants& inv, Complex mu) {
  if (std::abs(mu) == 0) throw Error(ErrorKind::ZeroScale, "scale factor must be nonzero");
  const Complex mu2 = mu * mu;
  const Complex mu4 = mu2 * mu2;
  CurveInvariants out(mu4 * inv.g2, mu4 * mu2 * inv.g3);
  // mu = +-1 or +-i leaves an exact shadow intact up to sign.
  if (inv.g2_exact && inv.g3_exact && mu4 == Complex(1) && mu2.imag() == 0) {
    out.g2_exact = inv.g2_exact;
    out.g3_exact = mu2.real() > 0 ? *inv.g3_exact : Rational(-*inv.g3_exact);
  }
  return out;
}

CurveInvariants scale_invariants(const CurveInvariants& inv, const Rational& mu4, const Rational& mu6) {
  if (mu4 == 0) throw Error(ErrorKind::ZeroScale, "scale factor must be nonzero");
  if (inv.g2_exact && inv.g3_exact) return CurveInvariants::exact(mu4 * *inv.g2_exact, mu6 * *inv.g3_exact);
  return {to_real(mu4) * inv.g2, to_real(mu6) * inv.g3};
}

Lattice scale_lattice(const Lattice& lat, Complex mu) {
  if (std::abs(mu) == 0) throw Error(ErrorKind::ZeroScale, "scale factor must be nonzero");
  Lattice out(scale_invariants(lat.inv_, mu), lat.prec_);
  out.omega1_ = lat.omega1_ / mu;
  out.omega2_ = lat.omega2_ / mu;
  out.eta1_ = lat.eta1_ * mu;
  out.eta2_ = lat.eta2_ * mu;
  out.q_ = lat.q_;
  const Complex mu2 = mu * mu;
  for (int k = 0; k < 3; ++k) out.roots_[k] = lat.roots_[k] * mu2;
  return out;
}

Residual addition_formula_residual(Complex z, Complex kappa, const Lattice& lat) {
  const Complex rhs = wp(kappa, lat) - wp(z, lat);
  const Complex ls = log_sigma(z + kappa, lat) + log_sigma(z - kappa, lat) - 2.0L * log_sigma(z, lat) -
                     2.0L * log_sigma(kappa, lat);
  const Complex lhs = std::exp(ls);
  return {lhs - rhs, std::max(std::abs(lhs), std::abs(rhs))};
}

Residual three_term_residual(Complex a, Complex b, Complex c, Complex d, const Lattice& lat) {
  auto term = [&](Complex p, Complex q, Complex r, Complex s) {
    const Complex args[4] = {p + q, p - q, r + s, r - s};
    for (const auto& arg : args) {
      if (at_lattice_point(centered_representative(arg, lat), lat)) return Complex(0);
    }
    return std::exp(log_sigma(args[0], lat) + log_sigma(args[1], lat) + log_sigma(args[2], lat) + log_sigma(args[3], lat));
  };
  const Complex t1 = term(c, d, a, b);
  const Complex t2 = term(b, d, a, c);
  const Complex t3 = term(b, c, a, d);
  return {t1 - t2 + t3, std::max({std::abs(t1), std::abs(t2), std::abs(t3)})};
}

Residual duplication_residual(Complex z, const Lattice& lat) {
  const WpPair v = wp_and_prime(z, lat);
  const Complex second = 6.0L * v.p * v.p - lat.g2() / 2.0L;
  const Complex ratio = second / v.dp;
  const Complex via_addition = ratio * ratio / 4.0L - 2.0L * v.p;
  const Complex direct = wp(2.0L * z, lat);
  return {direct - via_addition, std::max({std::abs(direct), std::abs(via_addition), std::abs(v.p)})};
}

std::pair<Residual, Residual> scaling_residuals(Complex z, Complex mu, const Lattice& lat) {
  const Lattice scaled = scale_lattice(lat, mu);
  const Complex p = wp(z, lat);
  const Complex p_scaled = wp(z / mu, scaled) / (mu * mu);
  const Complex s = std::exp(log_sigma(z, lat));
  const Complex s_scaled = mu * std::exp(log_sigma(z / mu, scaled));
  return {Residual{p - p_scaled, std::max(std::abs(p), std::abs(p_scaled))},
          Residual{s - s_scaled, std::max(std::abs(s), std::abs(s_scaled))}};
}

std::pair<Residual, Residual> eds_identity_residuals(Complex kappa, const Lattice& lat) {
  const WpPair v = wp_and_prime(kappa, lat);
  const Complex l1 = log_sigma(kappa, lat);
  const Complex l2 = log_sigma(2.0L * kappa, lat);
  const Complex l3 = log_sigma(3.0L * kappa, lat);
  const Complex dp2 = v.dp * v.dp;
  const Complex first_rhs = std::exp(2.0L * l2 - 8.0L * l1);
  const Complex second_lhs = dp2 * (wp(2.0L * kappa, lat) - v.p);
  const Complex second_rhs = -std::exp(l3 - 9.0L * l1);
  return {Residual{dp2 - first_rhs, std::max(std::abs(dp2), std::abs(first_rhs))},
          Residual{second_lhs - second_rhs, std::max(std::abs(second_lhs), std::abs(second_rhs))}};
}

Residual quartic_identity_residual(Complex kappa, const Lattice& lat) {
  const WpPair v = wp_and_prime(kappa, lat);
  const Complex second = 6.0L * v.p * v.p - lat.g2() / 2.0L;
  const Complex dp2 = v.dp * v.dp;
  const Complex lead = dp2 * dp2;
  const Complex cross = second * dp2 * (wp(2.0L * kappa, lat) - v.p);
  const Complex lhs = lead + cross;
  const Complex rhs = -std::exp(log_sigma(4.0L * kappa, lat) - log_sigma(2.0L * kappa, lat) - 12.0L * log_sigma(kappa, lat));
  return {lhs - rhs, std::max({std::abs(lhs), std::abs(rhs)})};
}

Residual differential_equation_residual(Complex z, const Lattice& lat) {
  const WpPair v = wp_and_prime(z, lat);
  const Complex lhs = v.dp * v.dp;
  const Complex rhs = 4.0L * v.p * v.p * v.p - lat.g2() * v.p - lat.g3();
  return {lhs - rhs, std::max(Real(1), std::abs(lhs))};
}

}  // namespace somos::weierstrass
