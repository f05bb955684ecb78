#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "somos/verify.hpp"

namespace somos::cli {

enum class Command { Iterate, Solve, Eval, Verify, Asymptotics };

enum ExitCode : int { kSuccess = 0, kInputError = 1, kDegenerate = 2, kVerificationFailure = 3 };

struct CommandConfig {
  Command command = Command::Solve;
  verify::Recurrence recurrence = verify::Recurrence::Somos5;
  std::vector<std::string> params;
  std::vector<std::string> seeds;
  std::optional<std::pair<exact::Index, exact::Index>> range;
  int precision = 18;  // decimal digits, at least 15
  std::optional<double> tol_consistency;
  std::optional<double> tol_reconstruction;
  std::optional<double> tol_identity;
  std::optional<double> tol_asymptotic;
  std::vector<std::string> suites{"all"};
  std::string input;   // solution JSON to take recurrence, params and seeds from
  std::string output;  // write here instead of standard output
};

/// Executes one command; JSON goes to `out` (or the output file), messages to `err`.
int run(const CommandConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (with optional --config JSON file) and runs the command.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace somos::cli
