#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace focuskit::cli {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitNumeric = 4;

/// Runs one verb. `args` excludes the program name. Reports go to `out` (or
/// the --output file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace focuskit::cli
