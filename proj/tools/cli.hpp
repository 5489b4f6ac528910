#pragma once

#include "stieltjes/linalg.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace smp {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kInputError = 2 };

// Parses "a+bi", "a-bi", "bi", "a", "i", "-i". Throws stieltjes::InvalidArgument.
stieltjes::Complex parse_complex(std::string_view text);

// Comma separated list of complex numbers.
std::vector<stieltjes::Complex> parse_grid(std::string_view text);

// Runs one command. args excludes the program name. Reports go to out (or to
// the --output file), diagnostics to err. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smp
