#pragma once

#include <iosfwd>

namespace relaq::cli {

// Exit codes
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kDataError = 2;
inline constexpr int kQueryError = 3;

// Entry point behind the relaq binary; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace relaq::cli
