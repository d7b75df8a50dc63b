#ifndef OWF_CLI_HPP
#define OWF_CLI_HPP

#include <iosfwd>

namespace owf {

/// Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
/// 3 refusal (no solution can exist for the requested configuration).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace owf

#endif  // OWF_CLI_HPP
