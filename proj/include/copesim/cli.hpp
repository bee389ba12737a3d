#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace copesim {

// "start:step:end" -> grid values. A zero step needs start == end and yields
// a single point. Throws std::invalid_argument on malformed specs.
std::vector<double> parse_grid(const std::string& spec);

// Entry point behind the binary: sweep / maxima / figure subcommands.
// Returns the process exit status; diagnostics go to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace copesim
