#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rydgate::cli {

// Parses argv (program name first) and runs one subcommand. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rydgate::cli
