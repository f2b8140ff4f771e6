#pragma once

namespace friable {

// Full command-line front end (subcommands rho, xi, sigma, bigf, zeta, count,
// estimate, sandwich, compare, selftest).  Returns the process exit code:
// 0 success, 1 selftest criteria failed, 2 domain/usage error, 3 resource
// error.  Lives in the library so tests can drive it in-process.
int run_cli(int argc, const char* const* argv);

}  // namespace friable
