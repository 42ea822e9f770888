#ifndef GAFZEROS_CLI_HPP_
#define GAFZEROS_CLI_HPP_

#include <iosfwd>
#include <string>

namespace gafzeros {

// Exit codes of the gafzeros executable.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;      // bad flags, config or parameter ranges
inline constexpr int kExitViolation = 2;  // a checked bound was violated
inline constexpr int kExitNumeric = 3;    // zero location or quadrature failed

std::string Version();

// Entry point shared by the executable and the end-to-end tests.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

// Shortest round-trip decimal, with ".0" appended to integral values.
std::string FormatNumber(double value);

}  // namespace gafzeros

#endif  // GAFZEROS_CLI_HPP_
