#include <boost/math/quadrature/exp_sinh.hpp>

#include "doctest.h"
#include "support.hpp"

#include "somos/errors.hpp"
#include "somos/weierstrass.hpp"

using namespace somos;
using namespace somos::weierstrass;
using somos::test::q;
using somos::test::uniform;

namespace {

struct NamedCurve {
  std::string name;
  Lattice lat;
};

// Rectangular (the rescaled worked-example curve and the square lattice),
// rhombic (negative discriminant) and genuinely complex invariants.
std::vector<NamedCurve> curves() {
  std::vector<NamedCurve> out;
  out.push_back({"starred example", lattice_from_invariants(CurveInvariants::exact(q("121/12"), q("-845/216")))});
  out.push_back({"square", lattice_from_invariants(CurveInvariants::exact(q("4"), q("0")))});
  out.push_back({"rhombic", lattice_from_invariants(CurveInvariants::exact(q("1"), q("1")))});
  out.push_back({"complex", lattice_from_invariants(CurveInvariants(Complex(2, 1), Complex(1, -0.5L)))});
  return out;
}

// A point with lattice coordinates in [0.05, 0.95)^2, away from the poles.
Complex cell_point(const Lattice& lat) {
  return 2.0L * uniform(0.05L, 0.95L) * lat.omega1() + 2.0L * uniform(0.05L, 0.95L) * lat.omega2();
}

// Same, but with 2z, 3z and 4z also kept away from the lattice.
Complex generic_point(const Lattice& lat) {
  for (;;) {
    const Complex z = cell_point(lat);
    bool ok = true;
    for (int m = 2; m <= 4; ++m) {
      const auto [a, b] = lattice_coordinates(static_cast<Real>(m) * z, lat);
      const Real da = std::abs(a - std::round(a));
      const Real db = std::abs(b - std::round(b));
      if (da < 0.02L && db < 0.02L) ok = false;
    }
    if (ok) return z;
  }
}

constexpr int kSamples = 20;

}  // namespace

TEST_CASE("curve roots") {
  const auto r = curve_roots(CurveInvariants::exact(q("4"), q("0")));
  CHECK(std::abs(r[0] - Complex(1)) < 1e-18L);
  CHECK(std::abs(r[1]) < 1e-18L);
  CHECK(std::abs(r[2] - Complex(-1)) < 1e-18L);

  const auto inv = CurveInvariants::exact(q("121/12"), q("-845/216"));
  const auto e = curve_roots(inv);
  CHECK(std::abs(e[0] + e[1] + e[2]) < 1e-12L);
  for (const auto& x : e) CHECK(std::abs(4.0L * x * x * x - inv.g2 * x - inv.g3) < 1e-12L);
  CHECK((e[0].real() > e[1].real() && e[1].real() > e[2].real()));

  const auto rh = curve_roots(CurveInvariants::exact(q("1"), q("1")));
  CHECK(rh[0].imag() == 0);
  CHECK(rh[1].imag() > 0);
  CHECK(rh[2] == std::conj(rh[1]));

  CHECK_THROWS_AS(curve_roots(CurveInvariants::exact(q("3"), q("1"))), Error);
  CHECK_THROWS_AS(lattice_from_invariants(CurveInvariants::exact(q("3"), q("1"))), Error);
}

TEST_CASE("nearly coincident roots stay accurate") {
  // e1 - e2 = 0.055 against |e| = 56: the polished roots must still be exact to a few ulps.
  const auto inv = CurveInvariants::exact(q("289525356001/30720000"), q("-155786303554247249/884736000000"));
  const auto e = curve_roots(inv);
  for (const auto& x : e) {
    const Real scale = 4 * std::pow(std::abs(x), 3.0L);
    CHECK(std::abs(4.0L * x * x * x - inv.g2 * x - inv.g3) / scale < 1e-17L);
  }
  const auto lat = lattice_from_invariants(inv);
  CHECK(std::abs(wp(lat.omega1(), lat) - e[0]) / std::abs(e[0]) < 1e-15L);
}

TEST_CASE("worked example lattice") {
  const auto lat = lattice_from_invariants(CurveInvariants::exact(q("121/12"), q("-845/216")));
  CHECK(std::abs(lat.omega1() - Complex(1.181965956L)) < 1e-8L);
  CHECK(std::abs(lat.omega2() - Complex(0, 0.973928783L)) < 1e-8L);
}

TEST_CASE("square lattice period against quadrature") {
  const auto lat = lattice_from_invariants(CurveInvariants::exact(q("4"), q("0")));
  // x = 1 + t^2 turns the integral of dx / sqrt(4x^3 - 4x) over [1, inf) into a smooth one.
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [](double t) { return 1.0 / std::sqrt((1 + t * t) * (2 + t * t)); };
  const double omega1 = integrator.integrate(f, 1e-14);
  CHECK(std::abs(lat.omega1() - Complex(omega1)) < 1e-10L);
  CHECK(std::abs(wp(lat.omega1(), lat) - Complex(1)) < 1e-10L);
}

TEST_CASE("lattice normalisation") {
  for (const auto& [name, lat] : curves()) {
    CAPTURE(name);
    CHECK((lat.omega2() / lat.omega1()).imag() > 0);
    CHECK(std::abs(lat.q()) < 1);
    CHECK(std::abs(lat.roots()[0] + lat.roots()[1] + lat.roots()[2]) < 1e-15L);
    // Legendre relation.
    CHECK(std::abs(lat.eta1() * lat.omega2() - lat.eta2() * lat.omega1() - Complex(0, kPi / 2)) < 1e-15L);
    const auto [g2, g3] = eisenstein_invariants(lat);
    CHECK(relative_difference(g2, lat.g2()) < 1e-10L);
    CHECK(relative_difference(g3, lat.g3()) < 1e-10L);
  }
}

TEST_CASE("half-period values are the roots") {
  for (const auto& [name, lat] : curves()) {
    CAPTURE(name);
    const auto& e = lat.roots();
    for (const Complex w : {lat.omega1(), lat.omega2(), lat.omega1() + lat.omega2()}) {
      const Complex x = wp(w, lat);
      Real best = std::abs(x - e[0]);
      for (const auto& r : e) best = std::min(best, std::abs(x - r));
      CHECK(best / std::max(Real(1), std::abs(x)) < 1e-12L);
      CHECK(std::abs(wp_prime(w, lat)) < 1e-9L * std::max(Real(1), std::pow(std::abs(x), 1.5L)));
    }
  }
}

TEST_CASE("differential equation") {
  for (const auto& [name, lat] : curves()) {
    CAPTURE(name);
    for (int i = 0; i < 100; ++i) {
      const auto r = differential_equation_residual(cell_point(lat), lat);
      CHECK(r.relative() < 1e-10L);
    }
  }
}

TEST_CASE("parity") {
  for (const auto& [name, lat] : curves()) {
    CAPTURE(name);
    for (int i = 0; i < 50; ++i) {
      const Complex z = cell_point(lat);
      CHECK(relative_difference(wp(-z, lat), wp(z, lat)) < 1e-12L);
      CHECK(relative_difference(wp_prime(-z, lat), -wp_prime(z, lat)) < 1e-12L);
      CHECK(relative_difference(sigma(-z, lat), -sigma(z, lat)) < 1e-12L);
      CHECK(relative_difference(zeta_w(-z, lat), -zeta_w(z, lat)) < 1e-12L);
    }
  }
}

TEST_CASE("sigma near the origin") {
  for (const auto& [name, lat] : curves()) {
    CAPTURE(name);
    const Complex z = 1e-6L * lat.omega1() / std::abs(lat.omega1());
    CHECK(std::abs(sigma(z, lat) / z - Complex(1)) < 1e-10L);
    CHECK(sigma(Complex(0), lat) == Complex(0));
    CHECK_THROWS_AS(wp(Complex(0), lat), Error);
    CHECK_THROWS_AS(wp(2.0L * lat.omega1(), lat), Error);
  }
}

TEST_CASE("addition formula") {
  for (const auto& [name, lat] : curves()) {
    CAPTURE(name);
    for (int i = 0; i < 100; ++i) {
      const Complex z = cell_point(lat);
      const Complex k = cell_point(lat);
      CHECK(addition_formula_residual(z, k, lat).relative() < 1e-10L);
    }
    const Complex z = cell_point(lat);
    const Complex k = cell_point(lat);
    auto lhs = [&](Complex a, Complex b) {
      return sigma(a + b, lat) * sigma(a - b, lat) / (std::pow(sigma(a, lat), 2) * std::pow(sigma(b, lat), 2));
    };
    CHECK(relative_difference(lhs(z, k), -lhs(k, z)) < 1e-12L);
  }
}

TEST_CASE("three-term equation") {
  for (const auto& [name, lat] : curves()) {
    CAPTURE(name);
    for (int i = 0; i < 100; ++i) {
      const Complex a = cell_point(lat), b = cell_point(lat), c = cell_point(lat), d = cell_point(lat);
      CHECK(three_term_residual(a, b, c, d, lat).relative() < 1e-9L);
      CHECK(three_term_residual(a, c, d, b, lat).relative() < 1e-9L);
      CHECK(three_term_residual(a, b, c, c, lat).relative() < 1e-10L);
    }
  }
}

TEST_CASE("duplication") {
  for (const auto& [name, lat] : curves()) {
    CAPTURE(name);
    for (int i = 0; i < kSamples; ++i) CHECK(duplication_residual(generic_point(lat), lat).relative() < 1e-9L);
  }
}

TEST_CASE("scaling") {
  for (const auto& [name, lat] : curves()) {
    CAPTURE(name);
    for (int i = 0; i < 50; ++i) {
      const Complex mu = std::polar(uniform(0.5L, 2.0L), uniform(-3.0L, 3.0L));
      const auto [rw, rs] = scaling_residuals(cell_point(lat), mu, lat);
      CHECK(rw.relative() < 1e-10L);
      CHECK(rs.relative() < 1e-10L);
    }
  }
}

TEST_CASE("scaling the invariants") {
  const CurveInvariants inv(Complex(121.0L / 72), Complex(-845.0L / (1296 * std::sqrt(6.0L))));
  const auto s = scale_invariants(inv, Complex(std::pow(6.0L, 0.25L)));
  CHECK(relative_difference(s.g2, Complex(121.0L / 12)) < 1e-15L);
  CHECK(relative_difference(s.g3, Complex(-845.0L / 216)) < 1e-15L);
  const auto one = scale_invariants(inv, Complex(1));
  CHECK((one.g2 == inv.g2 && one.g3 == inv.g3));
  const auto minus = scale_invariants(inv, Complex(-1));
  CHECK((minus.g2 == inv.g2 && minus.g3 == inv.g3));
  CHECK_THROWS_AS(scale_invariants(inv, Complex(0)), Error);
  const auto exact = scale_invariants(CurveInvariants::exact(q("121/72"), q("1")), q("6"), q("36"));
  CHECK(*exact.g2_exact == q("121/12"));
  CHECK(*exact.g3_exact == 36);
}

TEST_CASE("sigma ratios behind the parameter formulas") {
  for (const auto& [name, lat] : curves()) {
    CAPTURE(name);
    for (int i = 0; i < kSamples; ++i) {
      const Complex k = generic_point(lat);
      const auto [r1, r2] = eds_identity_residuals(k, lat);
      CHECK(r1.relative() < 1e-9L);
      CHECK(r2.relative() < 1e-9L);
      CHECK(quartic_identity_residual(k, lat).relative() < 1e-9L);
    }
  }
}

TEST_CASE("Laurent limit of the quartic identity") {
  for (const auto& [name, lat] : curves()) {
    CAPTURE(name);
    const Complex k = 1e-2L * std::min(Real(1), std::abs(lat.omega1())) * lat.omega1() / std::abs(lat.omega1());
    const Complex d = wp_prime(k, lat);
    const Complex lhs = std::pow(d, 4) + wp_second(k, lat) * d * d * (wp(2.0L * k, lat) - wp(k, lat));
    const Complex rhs = -sigma(4.0L * k, lat) / (sigma(2.0L * k, lat) * std::pow(sigma(k, lat), 12));
    const Complex k12 = std::pow(k, 12);
    CHECK(relative_difference(lhs * k12, Complex(-2)) < 1e-3L);
    CHECK(relative_difference(rhs * k12, Complex(-2)) < 1e-3L);
  }
}

TEST_CASE("Carlson integral and inversion") {
  CHECK(std::abs(carlson_rf(4, 4, 4) - Complex(0.5L)) < 1e-18L);
  const Complex x(2, 3);
  CHECK(std::abs(carlson_rf(x, x, x) - 1.0L / std::sqrt(x)) < 1e-18L);
  // R_F(0, 1, 2) = Gamma(1/4)^2 / (4 sqrt(2 pi)).
  CHECK(std::abs(carlson_rf(0, 1, 2) - Complex(1.3110287771460599052L)) < 1e-17L);

  const auto star = lattice_from_invariants(CurveInvariants::exact(q("121/12"), q("-845/216")));
  const Complex v = inverse_wp(Complex(29.0L / 12), star);
  CHECK(std::abs(std::abs(centered_representative(v, star)) - 0.672679183L) < 1e-8L);
  CHECK(relative_difference(wp(v, star), Complex(29.0L / 12)) < 1e-15L);

  for (const auto& [name, lat] : curves()) {
    CAPTURE(name);
    for (int i = 0; i < 50; ++i) {
      const Complex target(uniform(-3, 3), uniform(-3, 3));
      const Complex z = inverse_wp(target, lat);
      CHECK(relative_difference(wp(z, lat), target) < 1e-9L);
      const auto [a, b] = lattice_coordinates(z, lat);
      CHECK((a >= 0 && a < 1 && b >= 0 && b < 1));
    }
  }
}

TEST_CASE("cell reduction") {
  for (const auto& [name, lat] : curves()) {
    CAPTURE(name);
    const Complex inside = lat.omega1() + 0.5L * lat.omega2();
    CHECK(std::abs(reduce_to_cell(inside, lat) - inside) < 1e-18L);
    for (int i = 0; i < 50; ++i) {
      const Complex z = cell_point(lat) + 2.0L * static_cast<Real>(test::uniform_int(-3, 3)) * lat.omega1() +
                        2.0L * static_cast<Real>(test::uniform_int(-3, 3)) * lat.omega2();
      const Complex r = reduce_to_cell(z, lat);
      CHECK(std::abs(reduce_to_cell(z + 2.0L * lat.omega1(), lat) - r) < 1e-15L);
      CHECK(relative_difference(wp(z, lat), wp(r, lat)) < 1e-12L);
    }
  }
}
