#include "somos/json_io.hpp"

#include "somos/errors.hpp"

namespace somos::json_io {

namespace {

Json real_json(Real x) { return static_cast<double>(x); }

Json lattice_json(const weierstrass::Lattice& lat) {
  Json roots = Json::array();
  for (const auto& e : lat.roots()) roots.push_back(complex_json(e));
  return Json{{"omega1", complex_json(lat.omega1())}, {"omega2", complex_json(lat.omega2())},
              {"eta1", complex_json(lat.eta1())},     {"eta2", complex_json(lat.eta2())},
              {"q", complex_json(lat.q())},           {"roots", std::move(roots)}};
}

Json invariants_json(const weierstrass::CurveInvariants& inv) {
  Json out{{"g2", complex_json(inv.g2)}, {"g3", complex_json(inv.g3)}};
  if (inv.g2_exact) out["g2_exact"] = rational_json(*inv.g2_exact);
  if (inv.g3_exact) out["g3_exact"] = rational_json(*inv.g3_exact);
  if (auto j = inv.j_invariant_exact()) out["j_exact"] = rational_json(*j);
  return out;
}

Json convention_json(const ivp::Convention& c) {
  Json out = Json::object();
  for (const auto& [k, v] : c) out[k] = v;
  return out;
}

}  // namespace

Json complex_json(const Complex& z) { return Json{{"re", real_json(z.real())}, {"im", real_json(z.imag())}}; }

Json rational_json(const Rational& r) { return to_string(r); }

Json window_json(const exact::SequenceWindow& w) {
  Json values = Json::array();
  for (const auto& v : w.values()) values.push_back(rational_json(v));
  return Json{{"base_index", w.base_index()}, {"values", std::move(values)}};
}

Json solution_json(const ivp::Somos4Solution& sol) {
  return Json{
      {"recurrence", "somos4"},
      {"params", {rational_json(sol.params.alpha), rational_json(sol.params.beta)}},
      {"seeds", window_json(sol.seeds)},
      {"f", {{"f_minus1", rational_json(sol.f_minus1)}, {"f0", rational_json(sol.f0)}, {"f1", rational_json(sol.f1)}}},
      {"J", rational_json(sol.J)},
      {"lambda", rational_json(sol.lambda)},
      {"curve", invariants_json(sol.inv)},
      {"lattice", lattice_json(sol.lat)},
      {"kappa", complex_json(sol.kappa)},
      {"z0", complex_json(sol.z0)},
      {"wp_prime_kappa", complex_json(sol.wp_prime_kappa)},
      {"A", complex_json(sol.A())},
      {"B", complex_json(sol.B())},
      {"log_A", complex_json(sol.log_A)},
      {"log_B", complex_json(sol.log_B)},
      {"convention", convention_json(sol.convention)},
  };
}

Json solution_json(const ivp::Somos5Solution& sol) {
  const auto [v_rep, u0_rep] = ivp::reporting_pair(sol);
  return Json{
      {"recurrence", "somos5"},
      {"params", {rational_json(sol.params.alpha), rational_json(sol.params.beta)}},
      {"seeds", window_json(sol.seeds)},
      {"h",
       {{"h_minus1", rational_json(sol.h_minus1)},
        {"h0", rational_json(sol.h0)},
        {"h1", rational_json(sol.h1)},
        {"h2", rational_json(sol.h2)}}},
      {"f", {{"f0", rational_json(sol.f0)}, {"f1", rational_json(sol.f1)}}},
      {"Jt", rational_json(sol.Jt)},
      {"mu_t4", rational_json(sol.mu4)},
      {"mu_t", complex_json(sol.mu_t)},
      {"lambda_t", complex_json(sol.lambda_t)},
      {"x0", complex_json(sol.x0)},
      {"curve", invariants_json(sol.inv)},
      {"lattice", lattice_json(sol.lat)},
      {"kappa", complex_json(sol.kappa)},
      {"z0", complex_json(sol.z0)},
      {"rescaled",
       {{"curve", invariants_json(sol.inv_star)},
        {"lattice", lattice_json(sol.lat_star)},
        {"lambda_star", rational_json(sol.lambda_star)},
        {"mu_star", rational_json(sol.mu_star())},
        {"x0_star", rational_json(sol.x0_star)},
        {"y0_star", rational_json(sol.y0_star)},
        {"u0", complex_json(sol.u0)},
        {"v", complex_json(sol.v)},
        {"u0_reported", complex_json(u0_rep)},
        {"v_reported", complex_json(v_rep)}}},
      {"g2_star", rational_json(*sol.inv_star.g2_exact)},
      {"g3_star", rational_json(*sol.inv_star.g3_exact)},
      {"j", rational_json(*sol.inv_star.j_invariant_exact())},
      {"A_plus", complex_json(sol.A_plus())},
      {"A_minus", complex_json(sol.A_minus())},
      {"B_plus", complex_json(sol.B_plus())},
      {"B_minus", complex_json(sol.B_minus())},
      {"log_A_plus", complex_json(sol.log_A_plus)},
      {"log_A_minus", complex_json(sol.log_A_minus)},
      {"log_B_plus", complex_json(sol.log_B_plus)},
      {"log_B_minus", complex_json(sol.log_B_minus)},
      {"periodic_degeneracy", sol.periodic_degeneracy},
      {"convention", convention_json(sol.convention)},
  };
}

Json tau_json(const ivp::TauValue& t) {
  Json out{{"n", t.n}, {"log_abs", real_json(t.log_abs)}};
  if (t.real_value) {
    out["value"] = real_json(*t.real_value);
  } else if (t.value) {
    out["value"] = complex_json(*t.value);
  } else {
    out["value"] = nullptr;
  }
  return out;
}

std::vector<Rational> rationals_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidArgument, "expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& item : j) {
    if (item.is_string()) {
      out.push_back(parse_rational(item.get<std::string>()));
    } else if (item.is_number_integer()) {
      out.emplace_back(std::to_string(item.get<long long>()));
    } else {
      throw Error(ErrorKind::InvalidArgument, "rationals must be strings or integers");
    }
  }
  return out;
}

exact::SequenceWindow window_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("base_index") || !j.contains("values")) {
    throw Error(ErrorKind::InvalidArgument, "window needs base_index and values");
  }
  return {j.at("base_index").get<exact::Index>(), rationals_from_json(j.at("values"))};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace somos::json_io
