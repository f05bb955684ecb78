#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "somos/ivp.hpp"

// JSON forms of windows, solutions and evaluated terms. Rationals travel as
// "p/q" strings, floats as shortest round-trip decimals.
namespace somos::json_io {

using Json = nlohmann::ordered_json;

Json complex_json(const Complex& z);
Json rational_json(const Rational& r);
Json window_json(const exact::SequenceWindow& w);
Json solution_json(const ivp::Somos4Solution& sol);
Json solution_json(const ivp::Somos5Solution& sol);
Json tau_json(const ivp::TauValue& t);

exact::SequenceWindow window_from_json(const Json& j);
std::vector<Rational> rationals_from_json(const Json& j);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace somos::json_io
