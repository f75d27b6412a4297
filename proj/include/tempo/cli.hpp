#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tempo::cli {

inline constexpr const char* version = "0.1.0";

enum exit_code : int { ok = 0, usage_error = 1, data_failure = 2 };

/// Runs one command line (without the program name). Results go to `out` as
/// JSON lines, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tempo::cli
