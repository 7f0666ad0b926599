#pragma once

#include <iosfwd>

namespace saad::cli {

// Runs the `saad` command line. Returns the process exit code:
// 0 success, 2 validation, 3 consistency, 4 I/O.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace saad::cli
