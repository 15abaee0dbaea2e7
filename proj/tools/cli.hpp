#ifndef SSPF_TOOLS_CLI_HPP_
#define SSPF_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace sspf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `sspf` invocation. 0 on success, 1 on a failed precondition, an
/// unconverged solve or (with --strict) a violation verdict, 2 on usage errors
/// and unreadable inputs.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sspf::cli

#endif  // SSPF_TOOLS_CLI_HPP_
