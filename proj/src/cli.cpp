#include "somos/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "somos/errors.hpp"
#include "somos/json_io.hpp"

namespace somos::cli {

using json_io::Json;
using verify::Recurrence;

namespace {

constexpr int kMinDigits = 15;

std::vector<Rational> parse_list(const std::vector<std::string>& items) {
  std::vector<Rational> out;
  for (const auto& s : items) out.push_back(parse_rational(s));
  return out;
}

std::pair<exact::Index, exact::Index> parse_range(const std::string& text) {
  const auto colon = text.find(':', 1);
  if (colon == std::string::npos) throw Error(ErrorKind::InvalidArgument, "range must look like lo:hi");
  try {
    std::size_t used_lo = 0, used_hi = 0;
    const std::string lo_text = text.substr(0, colon), hi_text = text.substr(colon + 1);
    const auto lo = std::stoll(lo_text, &used_lo);
    const auto hi = std::stoll(hi_text, &used_hi);
    if (used_lo != lo_text.size() || used_hi != hi_text.size()) throw std::invalid_argument(text);
    if (lo > hi) throw Error(ErrorKind::InvalidArgument, "range needs lo <= hi");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidArgument, "range must look like lo:hi");
  }
}

Recurrence parse_recurrence(const std::string& name) {
  if (name == "somos4") return Recurrence::Somos4;
  if (name == "somos5") return Recurrence::Somos5;
  if (name == "eds") return Recurrence::Eds;
  throw Error(ErrorKind::InvalidArgument, "unknown recurrence '" + name + "'");
}

// Resolved inputs shared by all commands.
struct Inputs {
  Recurrence recurrence;
  std::vector<Rational> params;
  std::vector<Rational> seeds;
  Precision precision;
  ivp::Tolerances tol;
};

Inputs resolve(const CommandConfig& cfg) {
  Inputs in{cfg.recurrence, parse_list(cfg.params), parse_list(cfg.seeds), {}, {}};
  if (!cfg.input.empty()) {
    std::ifstream file(cfg.input);
    if (!file) throw Error(ErrorKind::InvalidArgument, "cannot read " + cfg.input);
    Json j;
    try {
      j = Json::parse(file);
      in.recurrence = parse_recurrence(j.at("recurrence").get<std::string>());
      in.params = json_io::rationals_from_json(j.at("params"));
      const auto window = json_io::window_from_json(j.at("seeds"));
      in.seeds.assign(window.values().begin(), window.values().end());
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::InvalidArgument, std::string("malformed solution file: ") + e.what());
    }
  }
  const std::size_t order = in.recurrence == Recurrence::Somos5 ? 5 : 4;
  if (in.seeds.size() != order) {
    throw Error(ErrorKind::InvalidSeed, "expected " + std::to_string(order) + " seeds, got " + std::to_string(in.seeds.size()));
  }
  if (in.recurrence != Recurrence::Eds) {
    if (in.params.size() != 2) throw Error(ErrorKind::InvalidParams, "expected two parameters alpha,beta");
    if (in.params[0] == 0 && in.params[1] == 0) throw Error(ErrorKind::InvalidParams, "parameters must not both vanish");
  }
  if (cfg.precision < kMinDigits) throw Error(ErrorKind::InvalidArgument, "precision must be at least 15 digits");
  in.precision = Precision::from_digits(cfg.precision);
  if (cfg.tol_consistency) in.tol.consistency = *cfg.tol_consistency;
  if (cfg.tol_reconstruction) in.tol.reconstruction = *cfg.tol_reconstruction;
  return in;
}

exact::SequenceWindow seed_window(const Inputs& in) { return {0, in.seeds}; }

Json run_iterate(const CommandConfig& cfg, const Inputs& in) {
  const auto [lo, hi] = cfg.range.value_or(std::pair<exact::Index, exact::Index>{0, 20});
  if (in.recurrence == Recurrence::Eds) {
    const exact::Index reach = std::max<exact::Index>({5, hi, -lo});
    const auto& a = in.seeds;
    return json_io::window_json(exact::iterate_eds(a[0], a[1], a[2], a[3], reach).slice(lo, hi));
  }
  const auto lo_clamped = std::min<exact::Index>(lo, 0);
  const auto hi_clamped = std::max<exact::Index>(hi, static_cast<exact::Index>(in.seeds.size()) - 1);
  const auto w = in.recurrence == Recurrence::Somos4
                     ? exact::iterate_somos4({in.params[0], in.params[1]}, seed_window(in), lo_clamped, hi_clamped)
                     : exact::iterate_somos5({in.params[0], in.params[1]}, seed_window(in), lo_clamped, hi_clamped);
  return json_io::window_json(w.slice(lo, hi));
}

void require_somos(const Inputs& in, const char* command) {
  if (in.recurrence == Recurrence::Eds) {
    throw Error(ErrorKind::InvalidArgument, std::string(command) + " needs --recurrence somos4 or somos5");
  }
}

Json run_solve(const Inputs& in) {
  require_somos(in, "solve");
  if (in.recurrence == Recurrence::Somos4) {
    return json_io::solution_json(ivp::solve_somos4({in.params[0], in.params[1]}, seed_window(in), in.precision, in.tol));
  }
  return json_io::solution_json(ivp::solve_somos5({in.params[0], in.params[1]}, seed_window(in), in.precision, in.tol));
}

Json run_eval(const CommandConfig& cfg, const Inputs& in) {
  require_somos(in, "eval");
  const auto [lo, hi] = cfg.range.value_or(std::pair<exact::Index, exact::Index>{0, 20});
  Json terms = Json::array();
  if (in.recurrence == Recurrence::Somos4) {
    const auto sol = ivp::solve_somos4({in.params[0], in.params[1]}, seed_window(in), in.precision, in.tol);
    for (auto n = lo; n <= hi; ++n) terms.push_back(json_io::tau_json(ivp::eval_tau(sol, n, in.tol)));
  } else {
    const auto sol = ivp::solve_somos5({in.params[0], in.params[1]}, seed_window(in), in.precision, in.tol);
    for (auto n = lo; n <= hi; ++n) terms.push_back(json_io::tau_json(ivp::eval_tau(sol, n, in.tol)));
  }
  return Json{{"terms", std::move(terms)}};
}

verify::Problem make_problem(const CommandConfig& cfg, const Inputs& in) {
  verify::Problem p;
  p.recurrence = in.recurrence;
  p.params = in.params;
  p.seeds = in.seeds;
  p.precision = in.precision;
  p.tolerances = in.tol;
  if (cfg.tol_identity) p.identity_tolerance = *cfg.tol_identity;
  if (cfg.tol_asymptotic) p.asymptotic_tolerance = *cfg.tol_asymptotic;
  if (cfg.range) {
    p.n_lo = cfg.range->first;
    p.n_hi = cfg.range->second;
    if (p.n_lo > 0 || p.n_hi < 16) throw Error(ErrorKind::InvalidArgument, "verify range must contain 0:16");
  }
  return p;
}

Json run_verify(const CommandConfig& cfg, const Inputs& in, bool& passed) {
  const auto report = verify::run(make_problem(cfg, in), cfg.suites);
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back(Json{{"suite", c.suite},
                          {"name", c.name},
                          {"residual", static_cast<double>(c.residual)},
                          {"tolerance", static_cast<double>(c.tolerance)},
                          {"passed", c.passed},
                          {"skipped", c.skipped},
                          {"note", c.note}});
  }
  passed = report.passed();
  return Json{{"suites", cfg.suites}, {"passed", passed}, {"checks", std::move(checks)}};
}

Json run_asymptotics(const CommandConfig& cfg, const Inputs& in) {
  require_somos(in, "asymptotics");
  const exact::Index n = cfg.range ? cfg.range->second : 30;
  if (n < 5) throw Error(ErrorKind::InvalidArgument, "asymptotics needs n >= 5");
  Real C = 0;
  exact::SequenceWindow tau;
  if (in.recurrence == Recurrence::Somos4) {
    const exact::Somos4Params p{in.params[0], in.params[1]};
    C = ivp::growth_constant(ivp::solve_somos4(p, seed_window(in), in.precision, in.tol), in.tol);
    tau = exact::iterate_somos4(p, seed_window(in), 0, n);
  } else {
    const exact::Somos5Params p{in.params[0], in.params[1]};
    C = ivp::growth_constant(ivp::solve_somos5(p, seed_window(in), in.precision, in.tol), in.tol);
    tau = exact::iterate_somos5(p, seed_window(in), 0, n);
  }
  const auto est = ivp::empirical_growth(tau, n);
  return Json{{"C", static_cast<double>(C)},
              {"n", n},
              {"empirical_estimate", static_cast<double>(est.corrected)},
              {"difference", static_cast<double>(est.corrected - C)},
              {"raw_quotient", static_cast<double>(est.raw)}};
}

void emit(const CommandConfig& cfg, const Json& j, std::ostream& out) {
  const std::string text = json_io::dump(j);
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output);
  if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write " + cfg.output);
  file << text;
}

// Flags from a JSON config object; explicit command-line flags win.
void apply_config_file(const std::string& path, CommandConfig& cfg, const CLI::App& app) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorKind::InvalidArgument, "cannot read config " + path);
  Json j;
  try {
    j = Json::parse(file);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed config: ") + e.what());
  }
  auto unset = [&](const char* flag) {
    const CLI::Option* opt = app.get_option_no_throw(std::string("--") + flag);
    return (opt == nullptr || opt->count() == 0) && j.contains(flag);
  };
  auto strings = [&](const char* key) {
    std::vector<std::string> out;
    const auto& v = j.at(key);
    if (v.is_array()) {
      for (const auto& item : v) out.push_back(item.is_string() ? item.get<std::string>() : item.dump());
    } else {
      std::stringstream ss(v.is_string() ? v.get<std::string>() : v.dump());
      for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
    }
    return out;
  };
  try {
    if (unset("recurrence")) cfg.recurrence = parse_recurrence(j.at("recurrence").get<std::string>());
    if (unset("params")) cfg.params = strings("params");
    if (unset("seeds")) cfg.seeds = strings("seeds");
    if (unset("range")) cfg.range = parse_range(j.at("range").get<std::string>());
    if (unset("precision")) cfg.precision = j.at("precision").get<int>();
    if (unset("suite")) cfg.suites = strings("suite");
    if (unset("tol-consistency")) cfg.tol_consistency = j.at("tol-consistency").get<double>();
    if (unset("tol-reconstruction")) cfg.tol_reconstruction = j.at("tol-reconstruction").get<double>();
    if (unset("tol-identity")) cfg.tol_identity = j.at("tol-identity").get<double>();
    if (unset("tol-asymptotic")) cfg.tol_asymptotic = j.at("tol-asymptotic").get<double>();
    if (unset("input")) cfg.input = j.at("input").get<std::string>();
    if (unset("output")) cfg.output = j.at("output").get<std::string>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("bad config value: ") + e.what());
  }
}

}  // namespace

int run(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Inputs in = resolve(cfg);
    bool passed = true;
    Json result;
    switch (cfg.command) {
      case Command::Iterate: result = run_iterate(cfg, in); break;
      case Command::Solve: result = run_solve(in); break;
      case Command::Eval: result = run_eval(cfg, in); break;
      case Command::Verify: result = run_verify(cfg, in, passed); break;
      case Command::Asymptotics: result = run_asymptotics(cfg, in); break;
    }
    emit(cfg, result, out);
    return passed ? kSuccess : kVerificationFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.is_degenerate() ? kDegenerate : kInputError;
  }
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact iteration and closed-form solution of Somos 4 and Somos 5 sequences"};
  app.require_subcommand(1);
  CommandConfig cfg;
  std::string recurrence = "somos5", range, config_path;

  const std::vector<std::pair<const char*, Command>> commands{
      {"iterate", Command::Iterate},   {"solve", Command::Solve},   {"eval", Command::Eval},
      {"verify", Command::Verify},     {"asymptotics", Command::Asymptotics}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, command] : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--recurrence", recurrence, "somos4, somos5 or eds");
    sub->add_option("--params", cfg.params, "alpha,beta as rationals")->delimiter(',');
    sub->add_option("--seeds", cfg.seeds, "initial terms tau0,... (a1..a4 for eds)")->delimiter(',');
    sub->add_option("--range", range, "index range lo:hi");
    sub->add_option("--precision", cfg.precision, "working precision in decimal digits (>= 15)");
    sub->add_option("--tol-consistency", cfg.tol_consistency);
    sub->add_option("--tol-reconstruction", cfg.tol_reconstruction);
    sub->add_option("--tol-identity", cfg.tol_identity);
    sub->add_option("--tol-asymptotic", cfg.tol_asymptotic);
    sub->add_option("--input", cfg.input, "solution JSON supplying recurrence, params and seeds");
    sub->add_option("--output", cfg.output, "write JSON here instead of standard output");
    sub->add_option("--config", config_path, "JSON file with the same keys as the flags");
    if (command == Command::Verify) sub->add_option("--suite", cfg.suites, "suite names or all")->delimiter(',');
    sub->callback([&cfg, command = command] { cfg.command = command; });
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kInputError;
  }
  try {
    const CLI::App* active = nullptr;
    for (auto* sub : subs) {
      if (sub->parsed()) active = sub;
    }
    if (active->count("--recurrence") > 0) cfg.recurrence = parse_recurrence(recurrence);
    if (!range.empty()) cfg.range = parse_range(range);
    if (!config_path.empty()) apply_config_file(config_path, cfg, *active);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return run(cfg, out, err);
}

}  // namespace somos::cli
