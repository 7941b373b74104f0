#ifndef GRTL_CLI_HPP
#define GRTL_CLI_HPP

#include <string>
#include <vector>

namespace grtl {

// Entry point behind the grtl binary. args excludes the program name.
// Returns 0 when every requested check passed, 1 when a certification check
// failed, and 2 for usage or configuration errors. Failed invocations leave
// no partially written output files.
int run_command(const std::vector<std::string>& args);

}  // namespace grtl

#endif
