#pragma once

#include <iosfwd>

namespace osnrecruit {

/// Runs the command line tool. Returns 0 on success, 1 on usage or
/// configuration errors, 2 on runtime errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace osnrecruit
