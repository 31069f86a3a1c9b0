#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nehari {

/// Runs one command line (without the program name). Exit status: 0 on
/// success (BLOCKED / NOT-FOUND outcomes included), 1 on domain errors, 2 on
/// usage and schema errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nehari
