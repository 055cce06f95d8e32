#pragma once

#include <ostream>

namespace mte {

/// Entry point of the `mte` tool. Returns the process exit code: 0 on success, 1 on a
/// runtime or domain error (or a failing reproduce suite), 2 on a usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mte
