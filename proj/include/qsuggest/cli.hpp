#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qsuggest::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kInternalError = 2;

// Runs one command line (without the program name). Normal output goes to
// `out`, warnings and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qsuggest::cli
