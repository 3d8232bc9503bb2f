#pragma once

#include <ostream>

namespace sphcover::cli {

/// Parses the arguments and runs one subcommand. Returns 0 on success, 1
/// when the library reports an error and 2 on a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sphcover::cli
