#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace sas::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;

// Entry point shared by the `sas` binary and the tests. args[0] is the
// program name. Subcommands: shape, simulate, aes, ndcg, truncation-study,
// sample.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace sas::cli
