#include "somos/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <optional>
#include <random>

#include "somos/errors.hpp"
#include "somos/qrt.hpp"

namespace somos::verify {

namespace w = weierstrass;
using exact::Index;
using exact::SequenceWindow;

namespace {

constexpr int kOrbitSteps = 50;
constexpr std::int64_t kRoundingDenominator = 1000000;
// Integer terms are rounded only below this size, where a relative error of
// 5e-10 still lands on the right integer.
constexpr long double kIntegerRoundingMagnitude = 1e9L;

Complex to_complex(const Rational& r) { return {to_real(r), 0}; }

Real exact_residual(const Rational& r) { return r == 0 ? 0 : std::abs(to_real(r)); }

Real max_exact_residual(const std::vector<Rational>& rs) {
  Real out = 0;
  for (const auto& r : rs) out = std::max(out, exact_residual(r));
  return out;
}

// Lazily built data shared by the suites of one run.
class Context {
 public:
  explicit Context(const Problem& p) : p_(p), rng_(p.rng_seed) {}

  const Problem& problem() const { return p_; }

  exact::Somos4Params params4() const { return {p_.params.at(0), p_.params.at(1)}; }
  exact::Somos5Params params5() const { return {p_.params.at(0), p_.params.at(1)}; }

  SequenceWindow seeds() const { return {0, p_.seeds}; }

  const SequenceWindow& window(Index lo, Index hi) {
    auto key = std::make_pair(lo, hi);
    for (const auto& [k, v] : windows_) {
      if (k == key) return v;
    }
    SequenceWindow w = p_.recurrence == Recurrence::Somos4 ? exact::iterate_somos4(params4(), seeds(), lo, hi)
                                                           : exact::iterate_somos5(params5(), seeds(), lo, hi);
    windows_.emplace_back(key, std::move(w));
    return windows_.back().second;
  }

  const ivp::Somos4Solution& sol4() {
    if (!sol4_) sol4_ = ivp::solve_somos4(params4(), seeds(), p_.precision, p_.tolerances);
    return *sol4_;
  }
  const ivp::Somos5Solution& sol5() {
    if (!sol5_) sol5_ = ivp::solve_somos5(params5(), seeds(), p_.precision, p_.tolerances);
    return *sol5_;
  }

  Real uniform(Real lo, Real hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  // Random point of the fundamental cell, kept away from lattice points.
  Complex cell_point(const w::Lattice& lat) {
    const Real s = uniform(0.05L, 0.95L);
    const Real t = uniform(0.05L, 0.95L);
    return 2.0L * s * lat.omega1() + 2.0L * t * lat.omega2();
  }

  void add(Report& r, const std::string& suite, const std::string& name, Real residual, Real tol,
           std::string note = {}) {
    const bool ok = std::isfinite(residual) && residual <= tol;
    r.checks.push_back({suite, name, residual, tol, ok, false, std::move(note)});
  }

  void skip(Report& r, const std::string& suite, const std::string& name, std::string note) {
    r.checks.push_back({suite, name, 0, 0, true, true, std::move(note)});
  }

 private:
  const Problem& p_;
  std::mt19937_64 rng_;
  std::list<std::pair<std::pair<Index, Index>, SequenceWindow>> windows_;  // stable references
  std::optional<ivp::Somos4Solution> sol4_;
  std::optional<ivp::Somos5Solution> sol5_;
};

// --- recurrence -----------------------------------------------------------------

void suite_recurrence(Context& c, Report& r) {
  const auto& p = c.problem();
  const std::string s = "recurrence";
  if (p.recurrence == Recurrence::Eds) {
    const auto& a = p.seeds;
    const auto eds = exact::iterate_eds(a.at(0), a.at(1), a.at(2), a.at(3), p.n_hi);
    Real worst = 0;
    for (Index n = 3; n + 2 <= p.n_hi; ++n) {
      const Rational res = eds.at(n + 2) * eds.at(n - 2) - a[1] * a[1] * eds.at(n + 1) * eds.at(n - 1) +
                           a[0] * a[2] * eds.at(n) * eds.at(n);
      worst = std::max(worst, exact_residual(res));
    }
    c.add(r, s, "eds recurrence", worst, 0);
    const bool integral = std::all_of(eds.values().begin(), eds.values().end(), is_integer);
    if (!integral || a[0] != 1) {
      c.skip(r, s, "divisibility", "needs integral terms with a1 = 1");
      return;
    }
    int failures = 0;
    for (Index n = 1; n <= p.n_hi; ++n) {
      if (eds.at(n) == 0) continue;
      for (Index m = 2 * n; m <= p.n_hi; m += n) failures += exact::check_divisibility(eds, n, m) ? 0 : 1;
    }
    c.add(r, s, "divisibility a(n) | a(m) for n | m", failures, 0);
    return;
  }
  const auto& tau = c.window(p.n_lo, p.n_hi);
  const auto res = p.recurrence == Recurrence::Somos4 ? exact::somos4_residuals(c.params4(), tau)
                                                      : exact::somos5_residuals(c.params5(), tau);
  c.add(r, s, p.recurrence == Recurrence::Somos4 ? "somos4 recurrence" : "somos5 recurrence", max_exact_residual(res), 0);

  const bool unit_seeds = std::all_of(p.seeds.begin(), p.seeds.end(), [](const Rational& x) { return abs(x) == 1; });
  const bool integer_params = is_integer(p.params.at(0)) && is_integer(p.params.at(1));
  if (unit_seeds && integer_params) {
    const auto count = std::count_if(tau.values().begin(), tau.values().end(), [](const Rational& x) { return !is_integer(x); });
    c.add(r, s, "integrality for unit seeds", static_cast<Real>(count), 0);
  } else {
    c.skip(r, s, "integrality for unit seeds", "seeds are not all +-1 or parameters are not integers");
  }
}

// --- Hankel batteries ------------------------------------------------------------

// a(m) = sigma(m k)/sigma(k)^(m^2) along with an error estimate: a(m) is an
// elliptic function of k, so evaluating it at k and at k + 2 omega1 + 2 omega2
// takes different numerical paths to the same value.
struct EdsValue {
  Complex value;
  Real error;
};

EdsValue eds_numeric_at(const w::Lattice& lat, Complex kappa, Index m) {
  const Real x = static_cast<Real>(m);
  const Real eps = std::numeric_limits<Real>::epsilon();
  auto at = [&](Complex k) { return std::exp(w::log_sigma(x * k, lat) - x * x * w::log_sigma(k, lat)); };
  const Complex a = at(kappa);
  const Complex b = at(kappa + 2.0L * lat.omega1() + 2.0L * lat.omega2());
  // kappa is pinned by wp(kappa); its uncertainty is one rounding of wp over |wp'|.
  const auto pk = w::wp_and_prime(kappa, lat);
  const Real scale = std::abs(pk.p) + std::sqrt(std::abs(lat.invariants().g2)) + std::cbrt(std::abs(lat.invariants().g3));
  const Real dk = 16 * eps * scale / std::max(std::abs(pk.dp), std::numeric_limits<Real>::min());
  const Complex c = at(kappa + dk * kappa / std::max(std::abs(kappa), std::numeric_limits<Real>::min()));
  const Real floor = 1024 * eps * std::max(Real(1), std::abs(a));
  return {a, std::max({floor, 8 * std::abs(a - b), 4 * std::abs(a - c)})};
}

// m kappa on the lattice means kappa is torsion and the term is an exact zero.
EdsValue eds_numeric(const w::Lattice& lat, Complex kappa, Index m) {
  try {
    return eds_numeric_at(lat, kappa, m);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PoleAtLatticePoint) throw;
    return {Complex(0), 0};
  }
}

// Rounds the numerically evaluated EDS to rationals and compares with the
// exact one. Rounding is only attempted where it is well posed: the error
// estimate must be below half the gap between fractions of denominator <= D.
struct Rounding {
  int mismatches = 0;
  int attempted = 0;
  Real worst = 0;
};

template <typename Numeric>
Rounding rounding_check(const SequenceWindow& exact_eds, Index m_hi, Numeric numeric) {
  Rounding out;
  for (Index m = 1; m <= m_hi; ++m) {
    const EdsValue x = numeric(m);
    const Rational expect = exact_eds.at(m);
    out.worst = std::max(out.worst, relative_difference(x.value, to_complex(expect)));
    const Real q = to_real(Rational(expect.get_den()));
    if (q > kRoundingDenominator || 2 * x.error * q * kRoundingDenominator >= 1) continue;
    ++out.attempted;
    if (nearest_rational(x.value.real(), kRoundingDenominator, x.error) != expect) ++out.mismatches;
  }
  return out;
}

Real hankel_battery(const SequenceWindow& tau, const SequenceWindow& a, bool somos5) {
  Real worst = 0;
  for (Index m = 2; m <= 5; ++m) {
    for (Index n = m + 2; n <= 10; ++n) {
      const Rational res = somos5 ? exact::check_hankel_somos5(tau, a, m, n) : exact::check_hankel_somos4(tau, a, m, n);
      worst = std::max(worst, exact_residual(res));
    }
  }
  return worst;
}

void hankel4_on(Context& c, Report& r, const exact::Somos4Params& params, const SequenceWindow& tau,
                const std::string& label) {
  const std::string s = "hankel4";
  std::optional<ivp::Somos4Solution> sol;
  try {
    sol = ivp::solve_somos4(params, tau.slice(0, 3), c.problem().precision, c.problem().tolerances);
  } catch (const Error& e) {
    c.skip(r, s, label, e.what());
    return;
  }
  std::optional<SequenceWindow> eds;
  try {
    eds = ivp::matched_eds(*sol, 8);
  } catch (const Error& e) {
    c.skip(r, s, label, std::string("matched EDS: ") + e.what());
    return;
  }
  if (eds) {
    const auto rounding = rounding_check(*eds, 8, [&](Index m) { return eds_numeric(sol->lat, sol->kappa, m); });
    c.add(r, s, label + ": sigma-side EDS vs exact EDS", rounding.worst, c.problem().identity_tolerance);
    c.add(r, s, label + ": rounded EDS mismatches", rounding.mismatches, 0,
          std::to_string(rounding.attempted) + " of 8 terms rounded");
    c.add(r, s, label + ": Hankel residual, 2 <= m <= 5, m+2 <= n <= 10", hankel_battery(tau, *eds, false), 0);
    return;
  }
  // alpha is not a rational square: the EDS lives in a quadratic extension,
  // so the identity is checked in floating point instead.
  Real worst = 0;
  for (Index m = 2; m <= 5; ++m) {
    const Complex am = ivp::eds_term_numeric(*sol, m);
    const Complex ap = ivp::eds_term_numeric(*sol, m + 1);
    const Complex amm = ivp::eds_term_numeric(*sol, m - 1);
    for (Index n = m + 2; n <= 10; ++n) {
      const Complex lhs = to_complex(tau.at(n + m) * tau.at(n - m));
      const Complex rhs = am * am * to_complex(tau.at(n + 1) * tau.at(n - 1)) - ap * amm * to_complex(tau.at(n) * tau.at(n));
      worst = std::max(worst, relative_difference(lhs, rhs));
    }
  }
  c.add(r, s, label + ": Hankel residual (alpha not a square, floating point)", worst, c.problem().identity_tolerance);
}

void suite_hankel4(Context& c, Report& r) {
  const auto& p = c.problem();
  if (p.recurrence == Recurrence::Somos4) {
    hankel4_on(c, r, c.params4(), c.window(0, 16), "sequence");
  } else if (p.recurrence == Recurrence::Somos5) {
    const auto& sol = c.sol5();
    const auto star = qrt::subsequence_somos4_params(sol.params, sol.Jt);
    if (star.alpha == 0) {
      c.skip(r, "hankel4", "even subsequence", "alpha* = 0");
      return;
    }
    const auto& tau = c.window(0, 32);
    hankel4_on(c, r, star, exact::parity_subsequence(tau, 0), "even subsequence");
  } else {
    c.skip(r, "hankel4", "hankel4", "needs a Somos recurrence");
  }
}

void hankel5_on(Context& c, Report& r, const ivp::Somos5Solution& sol, const SequenceWindow& tau,
                const std::string& label) {
  const std::string s = "hankel5";
  std::optional<SequenceWindow> built;
  try {
    built = ivp::matched_eds_normalized(sol, 8);
  } catch (const Error& e) {
    c.skip(r, s, label, std::string("matched EDS: ") + e.what());
    return;
  }
  const SequenceWindow& eds = *built;
  const auto rounding = rounding_check(eds, 8, [&](Index m) {
    EdsValue a = eds_numeric(sol.lat, sol.kappa, m);
    if (m % 2 == 0) a = {a.value / sol.mu_t, a.error / std::abs(sol.mu_t)};
    return a;
  });
  c.add(r, s, label + ": sigma-side EDS vs exact EDS", rounding.worst, c.problem().identity_tolerance);
  c.add(r, s, label + ": rounded EDS mismatches", rounding.mismatches, 0,
        std::to_string(rounding.attempted) + " of 8 terms rounded");
  c.add(r, s, label + ": Hankel residual, 2 <= m <= 5, m+2 <= n <= 10", hankel_battery(tau, eds, true), 0);
}

void suite_hankel5(Context& c, Report& r) {
  const auto& p = c.problem();
  if (p.recurrence == Recurrence::Somos5) {
    hankel5_on(c, r, c.sol5(), c.window(0, 16), "sequence");
  } else if (p.recurrence == Recurrence::Somos4) {
    // A Somos 4 sequence also satisfies Somos 5 with (-beta, alpha^2 + beta J).
    const auto& s4 = c.sol4();
    const auto p5 = qrt::somos4_to_somos5_params(s4.params, s4.J);
    const auto& tau = c.window(0, 16);
    try {
      const auto s5 = ivp::solve_somos5(p5, tau.slice(0, 4), p.precision, p.tolerances);
      hankel5_on(c, r, s5, tau, "as Somos 5");
    } catch (const Error& e) {
      c.skip(r, "hankel5", "as Somos 5", e.what());
    }
  } else {
    c.skip(r, "hankel5", "hankel5", "needs a Somos recurrence");
  }
}

// --- conserved quantities --------------------------------------------------------

template <typename F>
Real float_drift(const std::vector<Complex>& orbit, std::size_t arity, F invariant) {
  const Complex first = invariant(orbit.data());
  Real worst = 0;
  for (std::size_t k = 1; k + arity <= orbit.size(); ++k) {
    worst = std::max(worst, relative_difference(invariant(orbit.data() + k), first));
  }
  return worst;
}

template <typename F>
Real exact_drift(const std::vector<Rational>& orbit, std::size_t arity, F invariant) {
  const Rational first = invariant(orbit.data());
  Real worst = 0;
  for (std::size_t k = 1; k + arity <= orbit.size(); ++k) worst = std::max(worst, exact_residual(invariant(orbit.data() + k) - first));
  return worst;
}

void third_order_checks(Context& c, Report& r, const exact::Somos5Params& p5, const Rational& f0, const Rational& f1,
                        const Rational& f2) {
  const std::string s = "invariants";
  const auto orbit = qrt::f3_orbit(f0, f1, f2, p5, kOrbitSteps);
  const auto It = [&](const auto* x) { return qrt::invariant_It(x[0], x[1], x[2], p5); };
  const auto Jt = [&](const auto* x) { return qrt::invariant_Jt_from_f(x[0], x[1], x[2], p5); };
  const Rational it0 = qrt::invariant_It(f0, f1, f2, p5);
  const Rational jt0 = qrt::invariant_Jt_from_f(f0, f1, f2, p5);
  c.add(r, s, "I~ exact over third-order orbit", exact_drift(orbit, 3, It), 0, "I~ = " + to_string(it0));
  c.add(r, s, "J~ exact over third-order orbit", exact_drift(orbit, 3, Jt), 0, "J~ = " + to_string(jt0));
  const auto forbit = qrt::f3_orbit(to_complex(f0), to_complex(f1), to_complex(f2), p5, kOrbitSteps);
  c.add(r, s, "I~ drift over floating third-order orbit", float_drift(forbit, 3, It), 1e-10L);
  c.add(r, s, "J~ drift over floating third-order orbit", float_drift(forbit, 3, Jt), 1e-10L);
}

void suite_invariants(Context& c, Report& r) {
  const auto& p = c.problem();
  const std::string s = "invariants";
  if (p.recurrence == Recurrence::Somos4) {
    const auto& sol = c.sol4();
    const auto p4 = c.params4();
    const auto J = [&](const auto* x) { return qrt::invariant_J(x[0], x[1], p4); };
    const auto orbit = qrt::f_orbit(qrt::FState<Rational>{sol.f0, sol.f1, 1}, p4, kOrbitSteps);
    c.add(r, s, "J exact over f-map orbit", exact_drift(orbit, 2, J), 0, "J = " + to_string(sol.J));
    const auto forbit = qrt::f_orbit(qrt::FState<Complex>{to_complex(sol.f0), to_complex(sol.f1), 1}, p4, kOrbitSteps);
    c.add(r, s, "J drift over floating f-map orbit", float_drift(forbit, 2, J), 1e-10L);
    const auto p5 = qrt::somos4_to_somos5_params(p4, sol.J);
    const Rational f2 = qrt::step_f(qrt::FState<Rational>{sol.f0, sol.f1, 1}, p4).curr;
    third_order_checks(c, r, p5, sol.f0, sol.f1, f2);
    c.add(r, s, "J~ of the embedded Somos 5 equals J",
          exact_residual(qrt::invariant_Jt_from_f(sol.f0, sol.f1, f2, p5) - sol.J), 0);
  } else if (p.recurrence == Recurrence::Somos5) {
    const auto& sol = c.sol5();
    const auto p5 = c.params5();
    const auto Jt = [&](const auto* x) { return qrt::invariant_Jt(x[0], x[1], p5); };
    const auto orbit = qrt::h_orbit(qrt::HState<Rational>{sol.h0, sol.h1, 1}, p5, kOrbitSteps);
    c.add(r, s, "J~ exact over h-map orbit", exact_drift(orbit, 2, Jt), 0, "J~ = " + to_string(sol.Jt));
    const auto forbit = qrt::h_orbit(qrt::HState<Complex>{to_complex(sol.h0), to_complex(sol.h1), 1}, p5, kOrbitSteps);
    c.add(r, s, "J~ drift over floating h-map orbit", float_drift(forbit, 2, Jt), 1e-10L);
    third_order_checks(c, r, p5, sol.f0, sol.f1, Rational(sol.h1 / sol.f1));

    // The h-map as a symmetric biquadratic map with d = 1, b = alpha~, a = beta~.
    const qrt::BiquadraticCurve<Rational> curve{p5.beta, p5.alpha, 0, 1, 0};
    const auto K = [&](const auto* x) { return qrt::biquadratic_invariant(x[0], x[1], curve); };
    const auto borbit = qrt::biquadratic_orbit(sol.h0, sol.h1, curve, kOrbitSteps);
    c.add(r, s, "K~ exact over biquadratic orbit", exact_drift(borbit, 2, K), 0);
    c.add(r, s, "K~ equals J~ for the h-map curve", exact_residual(K(borbit.data()) - sol.Jt), 0);
    const qrt::BiquadraticCurve<Complex> fcurve{to_complex(p5.beta), to_complex(p5.alpha), 0, 1, 0};
    const auto Kf = [&](const auto* x) { return qrt::biquadratic_invariant(x[0], x[1], fcurve); };
    const auto fborbit = qrt::biquadratic_orbit(to_complex(sol.h0), to_complex(sol.h1), fcurve, kOrbitSteps);
    c.add(r, s, "K~ drift over floating biquadratic orbit", float_drift(fborbit, 2, Kf), 1e-10L);
  } else {
    c.skip(r, s, "invariants", "needs a Somos recurrence");
  }
}

// --- subsequences and embedding --------------------------------------------------

void suite_subsequence(Context& c, Report& r) {
  const auto& p = c.problem();
  const std::string s = "subsequence";
  if (p.recurrence == Recurrence::Somos5) {
    const auto check = ivp::somos4_from_even_odd(c.sol5(), 20);
    const std::string star = "(alpha*, beta*) = (" + to_string(check.star.alpha) + ", " + to_string(check.star.beta) + ")";
    c.add(r, s, "even terms satisfy the starred Somos 4", max_exact_residual(check.even_residuals), 0, star);
    c.add(r, s, "odd terms satisfy the starred Somos 4", max_exact_residual(check.odd_residuals), 0, star);
    c.add(r, s, "tau(n+2)tau(n-2)/tau(n)^2 = wp*(2v) - wp*(u0+nv), 2 <= n <= 8", check.canonical_form_error, 1e-8L);
  } else if (p.recurrence == Recurrence::Somos4) {
    const auto& sol = c.sol4();
    const auto p5 = qrt::somos4_to_somos5_params(sol.params, sol.J);
    const auto& tau = c.window(0, 20);
    c.add(r, s, "Somos 4 terms satisfy Somos 5 with (-beta, alpha^2 + beta J)",
          max_exact_residual(exact::somos5_residuals(p5, tau)), 0,
          "(alpha~, beta~) = (" + to_string(p5.alpha) + ", " + to_string(p5.beta) + ")");
    const Rational h0 = qrt::h_from_tau(tau, 1);
    const Rational h1 = qrt::h_from_tau(tau, 2);
    c.add(r, s, "J~ of the embedded h-map equals J", exact_residual(qrt::invariant_Jt(h0, h1, p5) - sol.J), 0);
  } else {
    c.skip(r, s, "subsequence", "needs a Somos recurrence");
  }
}

// --- analytic identities ---------------------------------------------------------

void curve_battery(Context& c, Report& r, const w::Lattice& lat, const std::string& label) {
  const std::string s = "identities";
  const Real tol = c.problem().identity_tolerance;
  const int n = c.problem().samples;
  Real addition = 0, three = 0, dup = 0, diffeq = 0, scale_wp = 0, scale_sigma = 0, eds1 = 0, eds2 = 0, quartic = 0;
  Real parity = 0, cell = 0;
  for (int i = 0; i < n; ++i) {
    const Complex z = c.cell_point(lat), k = c.cell_point(lat);
    addition = std::max(addition, w::addition_formula_residual(z, k, lat).relative());
    three = std::max(three, w::three_term_residual(z, k, c.cell_point(lat), c.cell_point(lat), lat).relative());
    dup = std::max(dup, w::duplication_residual(z, lat).relative());
    const Complex mu = std::polar(c.uniform(0.5L, 2.0L), c.uniform(-kPi, kPi));
    const auto [sw, ss] = w::scaling_residuals(z, mu, lat);
    scale_wp = std::max(scale_wp, sw.relative());
    scale_sigma = std::max(scale_sigma, ss.relative());
    const auto [e1, e2] = w::eds_identity_residuals(k, lat);
    eds1 = std::max(eds1, e1.relative());
    eds2 = std::max(eds2, e2.relative());
    quartic = std::max(quartic, w::quartic_identity_residual(k, lat).relative());
    parity = std::max({parity, relative_difference(w::wp(-z, lat), w::wp(z, lat)),
                       relative_difference(w::wp_prime(-z, lat), -w::wp_prime(z, lat)),
                       relative_difference(w::sigma(-z, lat), -w::sigma(z, lat)),
                       relative_difference(w::zeta_w(-z, lat), -w::zeta_w(z, lat))});
    cell = std::max(cell, relative_difference(w::wp(w::reduce_to_cell(z + 2.0L * lat.omega1(), lat), lat), w::wp(z, lat)));
  }
  for (int i = 0; i < 5 * n; ++i) diffeq = std::max(diffeq, w::differential_equation_residual(c.cell_point(lat), lat).relative());

  c.add(r, s, label + ": addition formula", addition, tol);
  c.add(r, s, label + ": three-term equation", three, tol);
  c.add(r, s, label + ": duplication", dup, tol);
  c.add(r, s, label + ": differential equation", diffeq, 1e-10L);
  c.add(r, s, label + ": scaling of wp", scale_wp, 1e-10L);
  c.add(r, s, label + ": scaling of sigma", scale_sigma, 1e-10L);
  c.add(r, s, label + ": parity of wp, wp', sigma, zeta", parity, 1e-12L);
  c.add(r, s, label + ": periodicity through cell reduction", cell, 1e-12L);
  c.add(r, s, label + ": efns wp'(k)^2 = sigma(2k)^2/sigma(k)^8", eds1, tol);
  c.add(r, s, label + ": efns wp'(k)^2 (wp(2k) - wp(k)) = -sigma(3k)/sigma(k)^9", eds2, tol);
  c.add(r, s, label + ": interest identity for sigma(4k)", quartic, tol);

  // 1e-2 on curves of unit scale; shrunk with the periods so the next
  // Laurent term stays negligible.
  const Complex small = 1e-2L * std::min(Real(1), std::abs(lat.omega1())) * lat.omega1() / std::abs(lat.omega1());
  const auto q = w::quartic_identity_residual(small, lat);
  const Complex lhs_scaled = (q.value - std::exp(w::log_sigma(4.0L * small, lat) - w::log_sigma(2.0L * small, lat) -
                                                 12.0L * w::log_sigma(small, lat))) *
                             std::pow(small, 12);
  c.add(r, s, label + ": interest identity Laurent limit -2", relative_difference(lhs_scaled, Complex(-2)), 1e-3L);

  const auto [eg2, eg3] = w::eisenstein_invariants(lat);
  c.add(r, s, label + ": Eisenstein round trip",
        std::max(relative_difference(eg2, lat.g2()), relative_difference(eg3, lat.g3())), 1e-10L);
}

void suite_identities(Context& c, Report& r) {
  const auto& p = c.problem();
  const std::string s = "identities";
  if (p.recurrence == Recurrence::Somos4) {
    const auto& sol = c.sol4();
    curve_battery(c, r, sol.lat, "curve");
    const auto pk = w::wp_and_prime(sol.kappa, sol.lat);
    const Complex p2k = w::wp(2.0L * sol.kappa, sol.lat);
    c.add(r, s, "alpha = wp'(kappa)^2", relative_difference(pk.dp * pk.dp, to_complex(sol.params.alpha)), 1e-9L);
    c.add(r, s, "beta = wp'(kappa)^2 (wp(2 kappa) - wp(kappa))",
          relative_difference(pk.dp * pk.dp * (p2k - pk.p), to_complex(sol.params.beta)), 1e-9L);
    c.add(r, s, "wp(kappa) = lambda", relative_difference(pk.p, to_complex(sol.lambda)), 1e-9L);
  } else if (p.recurrence == Recurrence::Somos5) {
    const auto& sol = c.sol5();
    curve_battery(c, r, sol.lat_star, "rescaled curve");
    curve_battery(c, r, sol.lat, "unscaled curve");
    const auto& lat = sol.lat;
    const auto pk = w::wp_and_prime(sol.kappa, lat);
    const Complex p2k = w::wp(2.0L * sol.kappa, lat);
    c.add(r, s, "lambda~ = wp(kappa)", relative_difference(pk.p, sol.lambda_t), 1e-8L);
    c.add(r, s, "mu~ = wp'(kappa)", relative_difference(pk.dp, sol.mu_t), 1e-8L);
    c.add(r, s, "J~ = wp''(kappa)", relative_difference(w::wp_second(sol.kappa, lat), to_complex(sol.Jt)), 1e-8L);
    c.add(r, s, "alpha~ = -wp'(kappa)^2 (wp(2 kappa) - wp(kappa))",
          relative_difference(-pk.dp * pk.dp * (p2k - pk.p), to_complex(sol.params.alpha)), 1e-8L);
    const auto h = qrt::h_orbit(qrt::HState<Rational>{sol.h_minus1, sol.h0, 0}, sol.params, 8);
    Real product = 0;
    for (Index n = 0; n <= 8; ++n) {
      const Complex lhs = to_complex(h[n] * h[n + 1]);
      const Complex rhs = pk.dp * pk.dp * (p2k - w::wp(sol.z0 + static_cast<Real>(n) * sol.kappa, lat));
      product = std::max(product, relative_difference(lhs, rhs));
    }
    c.add(r, s, "h(n-1)h(n) = wp'(kappa)^2 (wp(2 kappa) - wp(z0 + n kappa)), 0 <= n <= 8", product, 1e-8L);
    const Complex ratio = std::exp(sol.log_B_plus - sol.log_B_minus);
    c.add(r, s, "B+/B- = -sigma*(2v)", relative_difference(ratio, -w::sigma(2.0L * sol.v, sol.lat_star)), 1e-9L);
    c.add(r, s, "B+/B- = sigma(kappa)^4", relative_difference(ratio, std::exp(4.0L * w::log_sigma(sol.kappa, lat))),
          1e-8L);
    c.add(r, s, "wp*'(v) = mu~^4", relative_difference(w::wp_prime(sol.v, sol.lat_star), to_complex(sol.mu4)), 1e-9L);
  } else {
    c.skip(r, s, "identities", "needs a Somos recurrence");
  }
}

// --- closed-form reconstruction ---------------------------------------------------

template <typename Sol>
void tau_reconstruction(Context& c, Report& r, const Sol& sol) {
  const auto& p = c.problem();
  const std::string s = "reconstruction";
  const auto& tau = c.window(p.n_lo, p.n_hi);
  Real log_err = 0;
  int sign_errors = 0, rounding_errors = 0, rounded = 0;
  for (Index n = p.n_lo; n <= p.n_hi; ++n) {
    const auto t = ivp::eval_tau(sol, n, p.tolerances);
    const Rational& e = tau.at(n);
    if (e == 0) continue;
    log_err = std::max(log_err, std::abs(t.log_abs - log_abs(e)));
    if (t.real_value && ((*t.real_value < 0) != (e < 0))) ++sign_errors;
    if (t.real_value && is_integer(e) && std::abs(*t.real_value) < kIntegerRoundingMagnitude) {
      ++rounded;
      if (Rational(std::to_string(std::llround(*t.real_value))) != e) ++rounding_errors;
    }
  }
  const std::string range = std::to_string(p.n_lo) + " <= n <= " + std::to_string(p.n_hi);
  c.add(r, s, "log|tau(n)| against exact iteration, " + range, log_err, 1e-6L);
  c.add(r, s, "sign of tau(n), " + range, sign_errors, 0);
  c.add(r, s, "integer terms recovered by rounding", rounding_errors, 0, std::to_string(rounded) + " terms rounded");
  Real seed_err = 0;
  for (Index n = 0; n < static_cast<Index>(p.seeds.size()); ++n) {
    seed_err = std::max(seed_err, relative_difference(*ivp::eval_tau(sol, n, p.tolerances).value, to_complex(p.seeds[n]), 0));
  }
  c.add(r, s, "seeds reproduced", seed_err, p.tolerances.reconstruction);
}

void suite_reconstruction(Context& c, Report& r) {
  const auto& p = c.problem();
  const std::string s = "reconstruction";
  if (p.recurrence == Recurrence::Somos4) {
    tau_reconstruction(c, r, c.sol4());
  } else if (p.recurrence == Recurrence::Somos5) {
    const auto& sol = c.sol5();
    tau_reconstruction(c, r, sol);
    Real unscaled = 0;
    for (Index n = p.n_lo; n <= p.n_hi; ++n) {
      unscaled = std::max(unscaled, std::abs(ivp::eval_tau_unscaled(sol, n, p.tolerances).log_abs -
                                             ivp::eval_tau(sol, n, p.tolerances).log_abs));
    }
    c.add(r, s, "unscaled sigma form agrees with rescaled form", unscaled, 1e-6L);
    const auto& tau = c.window(p.n_lo, p.n_hi);
    Real forms = 0, h_err = 0, f_err = 0, fh_err = 0;
    for (Index n = 0; n <= 10; ++n) {
      const Complex hs = ivp::eval_h_closed(sol, n);
      forms = std::max(forms, relative_difference(hs, ivp::eval_h_closed_wp(sol, n)));
      h_err = std::max(h_err, relative_difference(hs, to_complex(qrt::h_from_tau(tau, n))));
      const Complex f = ivp::eval_f_closed(sol, n);
      f_err = std::max(f_err, relative_difference(f, to_complex(qrt::f_from_tau(tau, n))));
      fh_err = std::max(fh_err, relative_difference(f * ivp::eval_f_closed(sol, n + 1), hs));
    }
    c.add(r, s, "h(n): sigma form vs wp form, 0 <= n <= 10", forms, 1e-9L);
    c.add(r, s, "h(n): closed form vs exact, 0 <= n <= 10", h_err, 1e-9L);
    c.add(r, s, "f(n): alternating form vs exact, 0 <= n <= 10", f_err, 1e-9L);
    c.add(r, s, "f(n) f(n+1) = h(n), 0 <= n <= 10", fh_err, 1e-9L);
  } else {
    c.skip(r, s, "reconstruction", "needs a Somos recurrence");
  }
}

// --- asymptotics -----------------------------------------------------------------

void suite_asymptotics(Context& c, Report& r) {
  const auto& p = c.problem();
  const std::string s = "asymptotics";
  if (p.recurrence == Recurrence::Eds) {
    c.skip(r, s, "growth constant", "needs a Somos recurrence");
    return;
  }
  Real C = 0;
  try {
    C = p.recurrence == Recurrence::Somos4 ? ivp::growth_constant(c.sol4(), p.tolerances)
                                           : ivp::growth_constant(c.sol5(), p.tolerances);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotApplicable) throw;
    c.skip(r, s, "growth constant", e.what());
    return;
  }
  const auto& tau = c.window(0, p.asymptotic_n);
  const auto est = ivp::empirical_growth(tau, p.asymptotic_n);
  c.add(r, s, "second-difference estimate at n = " + std::to_string(est.n) + " against C", std::abs(est.corrected - C),
        p.asymptotic_tolerance,
        "C = " + std::to_string(static_cast<double>(C)) + ", log|tau(n)|/n^2 = " + std::to_string(static_cast<double>(est.raw)));
}

using SuiteFn = void (*)(Context&, Report&);

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> table{
      {"recurrence", suite_recurrence},     {"hankel4", suite_hankel4},
      {"hankel5", suite_hankel5},           {"invariants", suite_invariants},
      {"subsequence", suite_subsequence},   {"identities", suite_identities},
      {"reconstruction", suite_reconstruction}, {"asymptotics", suite_asymptotics},
  };
  return table;
}

}  // namespace

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : suites()) out.push_back(name);
    return out;
  }();
  return names;
}

Report run(const Problem& problem, const std::vector<std::string>& requested) {
  std::vector<std::string> names;
  for (const auto& name : requested) {
    if (name == "all") {
      names.insert(names.end(), suite_names().begin(), suite_names().end());
    } else if (std::find(suite_names().begin(), suite_names().end(), name) != suite_names().end()) {
      names.push_back(name);
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown suite '" + name + "'");
    }
  }
  Context ctx(problem);
  Report report;
  for (const auto& name : names) {
    for (const auto& [suite, fn] : suites()) {
      if (suite == name) fn(ctx, report);
    }
  }
  return report;
}

}  // namespace somos::verify
