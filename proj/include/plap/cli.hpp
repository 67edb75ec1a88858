#ifndef PLAP_CLI_HPP
#define PLAP_CLI_HPP

#include <string>

#include "plap/nonlinearity.hpp"

namespace plap {

/// Parses "constant:<c>" or "power:<q>" (power exponents must exceed 1).
/// Throws ParseError naming the expected grammar.
NonlinearitySpec parse_nonlinearity(const std::string& text);

/// Whole command-line front end: threshold, sweep, field-check, mesh, solve,
/// verify-identity, convergence, certificate. Returns the process exit
/// status: 0 success, 1 argument/domain errors (one-line diagnostic on
/// stderr), 2 numerical non-convergence (last residual reported).
int run_cli(int argc, const char* const* argv);

} // namespace plap

#endif
