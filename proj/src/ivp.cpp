#include "somos/ivp.hpp"

#include <cmath>
#include <limits>

#include "somos/errors.hpp"
#include "somos/qrt.hpp"

namespace somos::ivp {

namespace w = weierstrass;

namespace {

constexpr Real kMaxLogRepresentable = 11000.0L;

Complex log_rational(const Rational& r) { return {log_abs(r), r < 0 ? kPi : 0.0L}; }

Complex to_complex(const Rational& r) { return {to_real(r), 0}; }

void require_seeds(const SequenceWindow& seeds, std::size_t count) {
  if (seeds.size() != count || seeds.base_index() != 0) {
    throw Error(ErrorKind::InvalidSeed, "expected seeds tau0..tau" + std::to_string(count - 1));
  }
  if (seeds.has_zero()) throw Error(ErrorKind::ZeroSeed, "all seeds must be nonzero");
}

// Pick +z or -z so that wp'(z) matches target; both are equivalent when
// target is zero (z at a half-period).
Complex fix_sign(Complex z, const Complex& target, const w::Lattice& lat, Real tol, const char* what) {
  const Complex dp = w::wp_prime(z, lat);
  if (std::abs(dp + target) < std::abs(dp - target)) z = w::reduce_to_cell(-z, lat);
  const Complex check = w::wp_prime(z, lat);
  if (std::abs(check - target) > tol * std::max(Real(1), std::abs(target))) {
    throw Error(ErrorKind::ConsistencyFailure, std::string("no sign of ") + what + " satisfies the consistency equation");
  }
  return z;
}

void check_reconstruction(const SequenceWindow& seeds, const auto& sol, const Tolerances& tol) {
  for (Index n = 0; n < seeds.end_index(); ++n) {
    const TauValue t = eval_tau(sol, n, tol);
    const Complex expect = to_complex(seeds.at(n));
    if (!t.value || relative_difference(*t.value, expect, 0) > tol.reconstruction) {
      throw Error(ErrorKind::ConsistencyFailure, "closed form does not reproduce seed tau" + std::to_string(n));
    }
  }
}

TauValue make_tau(Index n, Complex log_value, bool real_data, const Tolerances& tol) {
  TauValue out;
  out.n = n;
  out.log_value = log_value;
  out.log_abs = log_value.real();
  if (std::abs(out.log_abs) < kMaxLogRepresentable) {
    out.value = std::exp(log_value);
    if (real_data) {
      const Complex v = *out.value;
      if (std::abs(v.imag()) / std::max(Real(1), std::abs(v.real())) >= tol.real_output) {
        throw Error(ErrorKind::PrecisionLoss, "closed form left an imaginary residue at n = " + std::to_string(n));
      }
      out.real_value = v.real();
    }
  } else if (real_data && std::abs(std::sin(log_value.imag())) >= tol.real_output) {
    throw Error(ErrorKind::PrecisionLoss, "closed form phase is not real at n = " + std::to_string(n));
  }
  return out;
}

Index floor_half(Index n) { return n >= 0 ? n / 2 : -((-n + 1) / 2); }

std::optional<Rational> rational_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  const BigInt num = r.get_num();
  const BigInt den = r.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return std::nullopt;
  BigInt sn, sd;
  mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
  Rational out(sn, sd);
  out.canonicalize();
  return out;
}

}  // namespace

// --- Somos 4 ------------------------------------------------------------------

Somos4Solution solve_somos4(const Somos4Params& params, const SequenceWindow& seeds, const Precision& prec,
                            const Tolerances& tol) {
  require_seeds(seeds, 4);
  const auto& t = seeds;
  const Rational f1 = t.at(2) * t.at(0) / (t.at(1) * t.at(1));
  const Rational f2 = t.at(3) * t.at(1) / (t.at(2) * t.at(2));

  const auto back = qrt::step_f_back(qrt::FState<Rational>{f1, f2, 2}, params);
  const Rational f0 = back.prev;
  const Rational f_minus1 = qrt::step_f_back(back, params).prev;
  const Rational J = qrt::invariant_J(f0, f1, params);

  if (params.alpha == 0) throw Error(ErrorKind::DegenerateCurve, "alpha = 0 puts kappa at a half-period");
  const Rational lambda = (J * J / 4 - params.beta) / (3 * params.alpha);
  const Rational g2 = 12 * lambda * lambda - 2 * J;
  const Rational g3 = 4 * lambda * lambda * lambda - g2 * lambda - params.alpha;
  const auto inv = w::CurveInvariants::exact(g2, g3);
  if (*inv.discriminant_exact() == 0) throw Error(ErrorKind::DegenerateCurve, "discriminant vanishes");

  Somos4Solution sol{params, seeds, f_minus1, f0, f1, J, lambda, inv, w::lattice_from_invariants(inv, prec)};
  const auto& lat = sol.lat;
  sol.wp_prime_kappa = std::sqrt(to_complex(params.alpha));
  sol.kappa = fix_sign(w::inverse_wp(to_complex(lambda), lat), sol.wp_prime_kappa, lat, tol.consistency, "kappa");
  const Complex z0_target = to_complex(f0 * f0 * (f1 - f_minus1)) / sol.wp_prime_kappa;
  sol.z0 = fix_sign(w::inverse_wp(to_complex(lambda - f0), lat), z0_target, lat, tol.consistency, "z0");

  const Complex ls_z0 = w::log_sigma(sol.z0, lat);
  sol.log_A = log_rational(t.at(0)) - ls_z0;
  sol.log_B = w::log_sigma(sol.kappa, lat) + ls_z0 + log_rational(t.at(1)) - w::log_sigma(sol.z0 + sol.kappa, lat) -
              log_rational(t.at(0));
  sol.convention = {
      {"wp_prime_kappa", "principal square root of alpha"},
      {"z0_sign", "wp'(z0) wp'(kappa) = f0^2 (f1 - f(-1))"},
      {"cell", "kappa and z0 reduced to the fundamental cell [0,1) x [0,1)"},
  };
  check_reconstruction(seeds, sol, tol);
  return sol;
}

TauValue eval_tau(const Somos4Solution& sol, Index n, const Tolerances& tol) {
  const Real x = static_cast<Real>(n);
  const Complex lv = sol.log_A + x * sol.log_B + w::log_sigma(sol.z0 + x * sol.kappa, sol.lat) -
                     x * x * w::log_sigma(sol.kappa, sol.lat);
  return make_tau(n, lv, sol.real_data, tol);
}

Real growth_constant(const Somos4Solution& sol, const Tolerances& tol) {
  const Complex k = w::centered_representative(sol.kappa, sol.lat);
  const Complex ratio = k / sol.lat.omega1();
  if (std::abs(ratio.imag()) > tol.applicability * std::max(Real(1), std::abs(ratio))) {
    throw Error(ErrorKind::NotApplicable, "kappa is not a real multiple of omega1");
  }
  const Complex w1 = sol.lat.omega1();
  return (sol.lat.eta1() * k * k / (2.0L * w1)).real() - w::log_sigma(k, sol.lat).real();
}

// --- Somos 5 ------------------------------------------------------------------

Somos5Solution solve_somos5(const Somos5Params& params, const SequenceWindow& seeds, const Precision& prec,
                            const Tolerances& tol) {
  require_seeds(seeds, 5);
  const auto& t = seeds;
  const Rational h1 = qrt::h_from_tau(t, 1);
  const Rational h2 = qrt::h_from_tau(t, 2);
  const auto s0 = qrt::step_h_back(qrt::HState<Rational>{h1, h2, 2}, params);
  const auto s1 = qrt::step_h_back(s0, params);
  const Rational h0 = s0.prev;
  const Rational h_minus1 = s1.prev;
  const Rational jt = qrt::invariant_Jt(h0, h1, params);

  const Rational mu4 = params.beta + params.alpha * jt;
  if (mu4 == 0) throw Error(ErrorKind::SingularMu, "beta~ + alpha~ J~ = 0");
  const Rational denom = h_minus1 + h0 - jt;
  if (denom == 0) throw Error(ErrorKind::DegenerateCurve, "h(-1) + h0 = J~ sends x0 to infinity");

  // Rescaled curve: every quantity below is rational.
  const Rational lambda_star = (jt * jt / 4 + params.alpha) / 3;
  const Rational g2_star = 12 * lambda_star * lambda_star - 2 * jt * mu4;
  const Rational g3_star = 4 * lambda_star * lambda_star * lambda_star - g2_star * lambda_star - mu4 * mu4;
  const Rational x0_star = lambda_star + mu4 / denom;
  const Rational y0_star = (x0_star - lambda_star) * (h_minus1 - h0);
  const auto inv_star = w::CurveInvariants::exact(g2_star, g3_star);
  if (*inv_star.discriminant_exact() == 0) throw Error(ErrorKind::DegenerateCurve, "discriminant vanishes");
  const Rational on_curve = 4 * x0_star * x0_star * x0_star - g2_star * x0_star - g3_star - y0_star * y0_star;
  if (on_curve != 0) throw Error(ErrorKind::ConsistencyFailure, "base point is not on the curve");

  const Complex mu_t = std::pow(to_complex(mu4), Real(0.25));
  const Complex mu2 = mu_t * mu_t;
  auto lat_star = w::lattice_from_invariants(inv_star, prec);
  auto lat = w::scale_lattice(lat_star, Real(1) / mu_t);
  w::CurveInvariants inv(to_complex(g2_star / mu4), to_complex(g3_star) / (to_complex(mu4) * mu2));
  inv.g2_exact = g2_star / mu4;

  Somos5Solution sol{params, seeds, h_minus1, h0, h1, h2, jt, h0 / qrt::f_from_tau(t, 1), qrt::f_from_tau(t, 1),
                     mu4, lambda_star, x0_star, y0_star, inv, inv_star, std::move(lat), std::move(lat_star)};
  sol.periodic_degeneracy = s0.periodic_degeneracy || s1.periodic_degeneracy;
  sol.mu_t = mu_t;
  sol.lambda_t = to_complex(lambda_star) / mu2;
  sol.x0 = to_complex(x0_star) / mu2;

  const auto& ls = sol.lat_star;
  sol.v = fix_sign(w::inverse_wp(to_complex(lambda_star), ls), to_complex(mu4), ls, tol.consistency, "v");
  sol.u0 = fix_sign(w::inverse_wp(to_complex(x0_star), ls), to_complex(y0_star), ls, tol.consistency, "u0");
  sol.kappa = mu_t * sol.v;
  sol.z0 = mu_t * sol.u0;

  // The unscaled consistency conditions, checked directly.
  const auto pk = w::wp_and_prime(sol.kappa, sol.lat);
  const auto pz = w::wp_and_prime(sol.z0, sol.lat);
  const Complex rhs = (sol.x0 - sol.lambda_t) * to_complex(h_minus1 - h0);
  if (relative_difference(pk.p, sol.lambda_t) > tol.consistency || relative_difference(pk.dp, mu_t) > tol.consistency ||
      relative_difference(pz.p, sol.x0) > tol.consistency || relative_difference(pk.dp * pz.dp, rhs) > tol.consistency) {
    throw Error(ErrorKind::ConsistencyFailure, "kappa and z0 fail the unscaled consistency equations");
  }

  const Complex v = sol.v, u0 = sol.u0;
  const Complex ls_2v = w::log_sigma(2.0L * v, ls);
  const Complex ls_u0 = w::log_sigma(u0, ls);
  const Complex ls_u0v = w::log_sigma(u0 + v, ls);
  sol.log_A_plus = log_rational(t.at(0)) - ls_u0;
  sol.log_A_minus = log_rational(t.at(1)) - ls_u0v;
  sol.log_B_plus = ls_2v + ls_u0 + log_rational(t.at(2)) - w::log_sigma(u0 + 2.0L * v, ls) - log_rational(t.at(0));
  sol.log_B_minus = ls_2v + ls_u0v + log_rational(t.at(3)) - w::log_sigma(u0 + 3.0L * v, ls) - log_rational(t.at(1));

  const Complex ratio = std::exp(sol.log_B_plus - sol.log_B_minus);
  if (relative_difference(ratio, -std::exp(ls_2v)) > tol.reconstruction) {
    throw Error(ErrorKind::ConsistencyFailure, "B+/B- differs from -sigma*(2v)");
  }
  sol.convention = {
      {"mu_branch", "principal fourth root of beta~ + alpha~ J~, arg in (-pi/4, pi/4]"},
      {"v_sign", "wp*'(v) = mu~^4 on the rescaled curve, equivalently wp'(kappa) = mu~"},
      {"u0_sign", "wp*'(u0) = (x0* - lambda*)(h(-1) - h0)"},
      {"cell", "u0 and v reduced to the fundamental cell [0,1) x [0,1) of the rescaled lattice"},
      {"evaluation_curve", "rescaled curve (g2*, g3*)"},
  };
  check_reconstruction(seeds, sol, tol);
  return sol;
}

TauValue eval_tau(const Somos5Solution& sol, Index n, const Tolerances& tol) {
  const Index k = floor_half(n);
  const bool even = (n - 2 * k) == 0;
  const Real x = static_cast<Real>(k);
  const Complex arg = sol.u0 + static_cast<Real>(n) * sol.v;
  const Complex lv = (even ? sol.log_A_plus + x * sol.log_B_plus : sol.log_A_minus + x * sol.log_B_minus) +
                     w::log_sigma(arg, sol.lat_star) - x * x * w::log_sigma(2.0L * sol.v, sol.lat_star);
  return make_tau(n, lv, sol.real_data, tol);
}

TauValue eval_tau_unscaled(const Somos5Solution& sol, Index n, const Tolerances& tol) {
  const Index k = floor_half(n);
  const bool even = (n - 2 * k) == 0;
  const Real x = static_cast<Real>(k);
  const Complex arg = sol.z0 + static_cast<Real>(n) * sol.kappa;
  const Complex lv = (even ? sol.log_A_plus + x * sol.log_B_plus : sol.log_A_minus + x * sol.log_B_minus) +
                     (x * x - 1) * std::log(sol.mu_t) + w::log_sigma(arg, sol.lat) -
                     x * x * w::log_sigma(2.0L * sol.kappa, sol.lat);
  return make_tau(n, lv, sol.real_data, tol);
}

Complex eval_h_closed(const Somos5Solution& sol, Index n) {
  const auto& lat = sol.lat;
  const Real x = static_cast<Real>(n);
  auto at = [&](Real k) { return w::log_sigma(sol.z0 + k * sol.kappa, lat); };
  return std::exp(at(x + 2) + at(x - 1) - at(x) - at(x + 1) - 4.0L * w::log_sigma(sol.kappa, lat));
}

Complex eval_h_closed_wp(const Somos5Solution& sol, Index n) {
  const auto& lat = sol.lat;
  const auto pk = w::wp_and_prime(sol.kappa, lat);
  const auto pz = w::wp_and_prime(sol.z0 + static_cast<Real>(n) * sol.kappa, lat);
  const Complex gap = pz.p - pk.p;
  if (std::abs(gap) <= std::numeric_limits<Real>::epsilon() * std::max(Real(1), std::abs(pk.p))) {
    throw Error(ErrorKind::PoleAtLatticePoint, "z0 + n kappa = +-kappa");
  }
  return -pk.dp / 2.0L * (pz.dp - pk.dp) / gap + w::wp_second(sol.kappa, lat) / 2.0L;
}

Complex eval_f_closed(const Somos5Solution& sol, Index n) {
  const auto& ls = sol.lat_star;
  const Complex pv = w::wp(sol.v, ls);
  const bool even = (n - 2 * floor_half(n)) == 0;
  const Complex base = even ? sol.u0 : sol.u0 + sol.v;
  const Complex scale = to_complex(even ? sol.f0 : sol.f1);
  return scale * (pv - w::wp(sol.u0 + static_cast<Real>(n) * sol.v, ls)) / (pv - w::wp(base, ls));
}

SubsequenceCheck somos4_from_even_odd(const Somos5Solution& sol, Index n_hi) {
  SubsequenceCheck out{qrt::subsequence_somos4_params(sol.params, sol.Jt), {}, {}, 0};
  const auto tau = exact::iterate_somos5(sol.params, sol.seeds, 0, n_hi);
  out.even_residuals = exact::somos4_residuals(out.star, exact::parity_subsequence(tau, 0));
  out.odd_residuals = exact::somos4_residuals(out.star, exact::parity_subsequence(tau, 1));
  const Complex p2v = w::wp(2.0L * sol.v, sol.lat_star);
  for (Index n = 2; n <= 8 && n + 2 <= n_hi; ++n) {
    const Rational ratio = tau.at(n + 2) * tau.at(n - 2) / (tau.at(n) * tau.at(n));
    const Complex closed = p2v - w::wp(sol.u0 + static_cast<Real>(n) * sol.v, sol.lat_star);
    out.canonical_form_error = std::max(out.canonical_form_error, relative_difference(closed, to_complex(ratio)));
  }
  return out;
}

Real growth_constant(const Somos5Solution& sol, const Tolerances& tol) {
  const auto& ls = sol.lat_star;
  const Complex v = w::centered_representative(sol.v, ls);
  const Complex ratio = v / ls.omega1();
  if (std::abs(ratio.imag()) > tol.applicability * std::max(Real(1), std::abs(ratio))) {
    throw Error(ErrorKind::NotApplicable, "v is not a real multiple of omega1");
  }
  return (ls.eta1() * v * v / (2.0L * ls.omega1())).real() - w::log_sigma(2.0L * v, ls).real() / 4.0L;
}

GrowthEstimate empirical_growth(const SequenceWindow& tau, Index n) {
  const Index m = n / 2;
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "empirical growth needs n >= 4");
  const Real rn = static_cast<Real>(n), rm = static_cast<Real>(m);
  GrowthEstimate out;
  out.n = n;
  out.raw = log_abs(tau.at(n)) / (rn * rn);
  out.corrected = (log_abs(tau.at(2 * m)) - 2 * log_abs(tau.at(m)) + log_abs(tau.at(0))) / (2 * rm * rm);
  return out;
}

std::pair<Complex, Complex> reporting_pair(const Somos5Solution& sol) {
  Complex v = w::centered_representative(sol.v, sol.lat_star);
  Complex u0 = sol.u0;
  if (v.real() > 0) {
    v = -v;
    u0 = -u0;
  }
  return {v, w::reduce_to_cell(u0, sol.lat_star)};
}

// --- matched EDS ---------------------------------------------------------------

namespace {

// m kappa on the lattice means kappa is torsion and the term vanishes.
Complex eds_sigma_ratio(const w::Lattice& lat, Complex kappa, Index m) {
  if (m == 0) return 0;
  const Real x = static_cast<Real>(m);
  try {
    return std::exp(w::log_sigma(x * kappa, lat) - x * x * w::log_sigma(kappa, lat));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PoleAtLatticePoint) throw;
    return 0;
  }
}

}  // namespace

Complex eds_term_numeric(const Somos4Solution& sol, Index m) { return eds_sigma_ratio(sol.lat, sol.kappa, m); }

Complex eds_term_numeric(const Somos5Solution& sol, Index m) { return eds_sigma_ratio(sol.lat, sol.kappa, m); }

std::optional<SequenceWindow> matched_eds(const Somos4Solution& sol, Index n_hi) {
  const auto root = rational_sqrt(sol.params.alpha);
  if (!root) return std::nullopt;
  const Rational a2 = -*root;
  const Rational a3 = -sol.params.beta;
  const Rational a4 = -a2 * (sol.params.alpha * sol.params.alpha + sol.params.beta * sol.J);
  return exact::iterate_eds(Rational(1), a2, a3, a4, n_hi);
}

SequenceWindow matched_eds_normalized(const Somos5Solution& sol, Index n_hi) {
  const auto& p = sol.params;
  return exact::iterate_eds_twisted(Rational(1), Rational(-1), p.alpha, p.beta, Rational(1), sol.mu4,
                                    Rational(-p.alpha), n_hi);
}

}  // namespace somos::ivp
