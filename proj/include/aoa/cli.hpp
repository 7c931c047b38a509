#pragma once

#include <iosfwd>

namespace aoa {

/// Entry point of the aoa command-line tool. Returns 0 on success, 2 on a
/// usage error and 1 on any other failure.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aoa
