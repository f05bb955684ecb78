#include "doctest.h"
#include "support.hpp"

#include "somos/errors.hpp"
#include "somos/qrt.hpp"

using namespace somos;
using namespace somos::qrt;
using somos::test::q;
using somos::test::window;

namespace {

const Somos4Params kP4{Rational(1), Rational(1)};
const Somos5Params kP5{Rational(1), Rational(1)};

exact::SequenceWindow somos5_window() {
  return exact::iterate_somos5(kP5, window(0, {"1", "1", "1", "1", "1"}), -1, 20);
}

exact::SequenceWindow somos4_window() {
  return exact::iterate_somos4(kP4, window(0, {"1", "1", "1", "1"}), -2, 20);
}

Complex c(const char* text) { return from_rational<Complex>(q(text)); }

// Largest relative deviation of a sequence of invariant values from the first.
Real drift(const std::vector<Complex>& values) {
  Real worst = 0;
  for (const auto& v : values) worst = std::max(worst, relative_difference(v, values.front()));
  return worst;
}

}  // namespace

TEST_CASE("f and h from an exact window") {
  const auto t5 = somos5_window();
  CHECK(f_from_tau(t5, 4) == 2);
  CHECK(h_from_tau(t5, 0) == 2);
  CHECK(h_from_tau(t5, 1) == 1);
  CHECK(h_from_tau(t5, 4) == q("3/2"));
  CHECK(f_from_tau(somos4_window(), 1) == 1);
  const auto flat = window(0, {"1", "1", "1", "1"});
  CHECK(f_from_tau(flat, 1) == 1);
  CHECK(h_from_tau(flat, 1) == 1);
  for (exact::Index n = 0; n <= 15; ++n) CHECK(h_from_tau(t5, n) == f_from_tau(t5, n + 1) * f_from_tau(t5, n));
  CHECK_THROWS_AS(f_from_tau(window(0, {"1", "0", "1"}), 1), Error);
  CHECK_THROWS_AS(h_from_tau(flat, 3), Error);
}

TEST_CASE("f-map steps and J") {
  const auto s = step_f(FState<Rational>{q("2"), q("1"), 1}, kP4);
  CHECK(s.curr == 1);
  CHECK(s.index == 2);
  CHECK(step_f(FState<Rational>{q("1"), q("1"), 0}, Somos4Params{q("1"), q("0")}).curr == 1);
  CHECK(step_f_back(FState<Rational>{q("1"), q("1"), 0}, kP4).prev == 2);
  CHECK(invariant_J(q("2"), q("1"), kP4) == 4);
  CHECK(invariant_J(q("1"), q("1"), Somos4Params{q("1"), q("0")}) == 3);
  CHECK_THROWS_AS(invariant_J(q("0"), q("1"), kP4), Error);
  CHECK_THROWS_AS(step_f(FState<Rational>{q("1"), q("1"), 0}, Somos4Params{q("1"), q("-1")}), Error);
}

TEST_CASE("h-map steps and J~") {
  auto s = step_h(HState<Rational>{q("2"), q("1"), 1}, kP5);
  CHECK(s.curr == 1);
  s = step_h(s, kP5);
  CHECK(s.curr == 2);
  s = step_h(s, kP5);
  CHECK(s.curr == q("3/2"));
  CHECK(step_h(HState<Rational>{q("1"), q("1"), 0}, Somos5Params{q("0"), q("1")}).curr == 1);
  const auto fwd = step_h(HState<Rational>{q("2"), q("1"), 1}, kP5);
  CHECK(step_h_back(fwd, kP5).prev == 2);
  CHECK(invariant_Jt(q("2"), q("1"), kP5) == 5);
  CHECK(invariant_Jt(q("1"), q("1"), Somos5Params{q("1"), q("0")}) == 4);
}

TEST_CASE("period-two h orbits raise the degeneracy flag") {
  // alpha~ = 0, beta~ = 1: (1, 1) is a fixed point, so h(n+1) = h(n-1) at once.
  bool flagged = false;
  h_orbit(HState<Rational>{q("1"), q("1"), 0}, Somos5Params{q("0"), q("1")}, 4, &flagged);
  CHECK(flagged);
  flagged = false;
  h_orbit(HState<Rational>{q("2"), q("1"), 0}, kP5, 10, &flagged);
  CHECK_FALSE(flagged);
}

TEST_CASE("third-order map and I~") {
  CHECK(step_f3(q("1"), q("1"), q("1"), kP5) == 2);
  CHECK(step_f3(q("1"), q("1"), q("1"), Somos5Params{q("0"), q("1")}) == 1);
  CHECK(invariant_It(q("2"), q("1"), q("1"), Somos5Params{q("-1"), q("5")}) == 2);
  CHECK(invariant_It(q("1"), q("1"), q("1"), Somos5Params{q("0"), q("1")}) == 2);
  const auto t5 = somos5_window();
  const auto orbit = f3_orbit(f_from_tau(t5, 0), f_from_tau(t5, 1), f_from_tau(t5, 2), kP5, 15);
  for (std::size_t k = 0; k < orbit.size(); ++k) CHECK(orbit[k] == f_from_tau(t5, static_cast<exact::Index>(k)));
  CHECK(step_f3_back(orbit[1], orbit[2], orbit[3], kP5) == orbit[0]);
}

TEST_CASE("parameter transfers") {
  const auto p5 = somos4_to_somos5_params(kP4, q("4"));
  CHECK(p5.alpha == -1);
  CHECK(p5.beta == 5);
  const auto tau = exact::iterate_somos4(kP4, window(0, {"1", "1", "1", "1"}), 0, 20);
  for (const auto& r : exact::somos5_residuals(p5, tau)) CHECK(r == 0);
  const auto b0 = somos4_to_somos5_params(Somos4Params{q("3"), q("0")}, q("7"));
  CHECK((b0.alpha == 0 && b0.beta == 9));
  const auto a0 = somos4_to_somos5_params(Somos4Params{q("0"), q("2")}, q("7"));
  CHECK((a0.alpha == -2 && a0.beta == 14));

  const auto star = subsequence_somos4_params(kP5, q("5"));
  CHECK(star.alpha == 1);
  CHECK(star.beta == 8);
  const auto t5 = exact::iterate_somos5(kP5, window(0, {"1", "1", "1", "1", "1"}), 0, 40);
  for (exact::Index start : {0, 1}) {
    for (const auto& r : exact::somos4_residuals(star, exact::parity_subsequence(t5, start))) CHECK(r == 0);
  }
  CHECK(exact::parity_subsequence(t5, 0).at(6) == 1217);
  CHECK(exact::parity_subsequence(t5, 1).at(6) == 6161);
  const auto z = subsequence_somos4_params(Somos5Params{q("0"), q("3")}, q("1"));
  CHECK((z.alpha == 9 && z.beta == 0));
}

TEST_CASE("h lies on the cubic curve") {
  CHECK(h_curve_residual(q("2"), q("1"), kP5, q("5")) == 0);
  CHECK(h_curve_residual(q("1"), q("2"), kP5, q("5")) == 0);
  const auto orbit = h_orbit(HState<Rational>{q("2"), q("1"), 1}, kP5, 20);
  for (std::size_t k = 1; k < orbit.size(); ++k) CHECK(h_curve_residual(orbit[k - 1], orbit[k], kP5, q("5")) == 0);
  for (std::size_t k = 2; k < orbit.size(); ++k) {
    CHECK(jt_difference_residual(orbit[k - 2], orbit[k - 1], orbit[k], kP5) == 0);
  }
}

TEST_CASE("biquadratic map reduces to the f-map and the h-map") {
  const Somos4Params p4{q("3/2"), q("-2")};
  const BiquadraticCurve<Rational> fcurve{p4.beta, p4.alpha, q("0"), q("0"), q("1")};
  CHECK(biquadratic_invariant(q("2"), q("5/3"), fcurve) == invariant_J(q("2"), q("5/3"), p4));
  CHECK(biquadratic_step(q("2"), q("5/3"), fcurve) == step_f(FState<Rational>{q("2"), q("5/3"), 0}, p4).curr);

  const Somos5Params p5{q("2"), q("-1/3")};
  const BiquadraticCurve<Rational> hcurve{p5.beta, p5.alpha, q("0"), q("1"), q("0")};
  CHECK(biquadratic_invariant(q("4"), q("1/2"), hcurve) == invariant_Jt(q("4"), q("1/2"), p5));
  CHECK(biquadratic_step(q("4"), q("1/2"), hcurve) == step_h(HState<Rational>{q("4"), q("1/2"), 0}, p5).curr);
}

TEST_CASE("biquadratic curve contains consecutive iterates") {
  BiquadraticCurve<Rational> k{q("1"), q("2"), q("3"), q("4"), q("5")};
  k.K = biquadratic_invariant(q("1"), q("1"), k);
  const auto orbit = biquadratic_orbit(q("1"), q("1"), k, 12);
  for (std::size_t i = 1; i < orbit.size(); ++i) CHECK(biquadratic_curve_value(orbit[i - 1], orbit[i], k) == 0);
}

TEST_CASE("exact conservation over 50 steps") {
  const Somos4Params p4{q("2"), q("-3/5")};
  const auto f = f_orbit(FState<Rational>{q("3"), q("1/2"), 0}, p4, 50);
  for (std::size_t k = 1; k < f.size(); ++k) CHECK(invariant_J(f[k - 1], f[k], p4) == invariant_J(f[0], f[1], p4));

  const Somos5Params p5{q("-2/3"), q("5")};
  const auto h = h_orbit(HState<Rational>{q("3"), q("-1/2"), 0}, p5, 50);
  for (std::size_t k = 1; k < h.size(); ++k) CHECK(invariant_Jt(h[k - 1], h[k], p5) == invariant_Jt(h[0], h[1], p5));

  const auto g = f3_orbit(q("2"), q("1/3"), q("-1"), p5, 50);
  const Rational it0 = invariant_It(g[0], g[1], g[2], p5);
  const Rational jt0 = invariant_Jt_from_f(g[0], g[1], g[2], p5);
  for (std::size_t k = 2; k < g.size(); ++k) {
    CHECK(invariant_It(g[k - 2], g[k - 1], g[k], p5) == it0);
    CHECK(invariant_Jt_from_f(g[k - 2], g[k - 1], g[k], p5) == jt0);
    CHECK(invariant_Jt_from_f(g[k - 2], g[k - 1], g[k], p5) == invariant_Jt(Rational(g[k - 2] * g[k - 1]), Rational(g[k - 1] * g[k]), p5));
  }

  const BiquadraticCurve<Rational> k{q("1"), q("2"), q("3"), q("4"), q("5")};
  const auto u = biquadratic_orbit(q("1"), q("1"), k, 50);
  for (std::size_t i = 1; i < u.size(); ++i) CHECK(biquadratic_invariant(u[i - 1], u[i], k) == biquadratic_invariant(u[0], u[1], k));
}

TEST_CASE("floating conservation over 50 steps") {
  const Somos4Params p4{q("2"), q("-3/5")};
  std::vector<Complex> values;
  const auto f = f_orbit(FState<Complex>{c("3"), c("1/2"), 0}, p4, 50);
  for (std::size_t k = 1; k < f.size(); ++k) values.push_back(invariant_J(f[k - 1], f[k], p4));
  CHECK(drift(values) < 1e-10L);

  const Somos5Params p5{q("-2/3"), q("5")};
  values.clear();
  const auto h = h_orbit(HState<Complex>{c("3"), c("-1/2"), 0}, p5, 50);
  for (std::size_t k = 1; k < h.size(); ++k) values.push_back(invariant_Jt(h[k - 1], h[k], p5));
  CHECK(drift(values) < 1e-10L);

  std::vector<Complex> it, jt;
  const auto g = f3_orbit(c("2"), c("1/3"), c("-1"), p5, 50);
  for (std::size_t k = 2; k < g.size(); ++k) {
    it.push_back(invariant_It(g[k - 2], g[k - 1], g[k], p5));
    jt.push_back(invariant_Jt_from_f(g[k - 2], g[k - 1], g[k], p5));
  }
  CHECK(drift(it) < 1e-10L);
  CHECK(drift(jt) < 1e-10L);

  const BiquadraticCurve<Complex> k{c("1"), c("2"), c("3"), c("4"), c("5")};
  values.clear();
  const auto u = biquadratic_orbit(c("1"), c("1"), k, 50);
  for (std::size_t i = 1; i < u.size(); ++i) values.push_back(biquadratic_invariant(u[i - 1], u[i], k));
  CHECK(drift(values) < 1e-12L);
}

TEST_CASE("Somos 4 orbits embed in the third-order map") {
  const auto tau = somos4_window();
  const auto p5 = somos4_to_somos5_params(kP4, q("4"));
  std::vector<Rational> f;
  for (exact::Index n = -1; n <= 18; ++n) f.push_back(f_from_tau(tau, n));
  const auto g = f3_orbit(f[0], f[1], f[2], p5, 17);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(g[k] == f[k]);
  for (std::size_t k = 2; k < g.size(); ++k) {
    CHECK(invariant_It(g[k - 2], g[k - 1], g[k], p5) == 2 * kP4.alpha);
    CHECK(invariant_Jt_from_f(g[k - 2], g[k - 1], g[k], p5) == 4);
  }
}

TEST_CASE("gauge invariance of f and h") {
  const auto tau = somos5_window();
  const auto any = exact::gauge_transform(tau, q("-2"), q("9/4"), q("3"));
  const auto same = exact::gauge_transform(tau, q("5/7"), q("5/7"), q("-2"));
  for (exact::Index n = 0; n <= 16; ++n) {
    CHECK(h_from_tau(any, n) == h_from_tau(tau, n));
    CHECK(f_from_tau(same, n) == f_from_tau(tau, n));
  }
}
