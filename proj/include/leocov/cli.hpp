#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace leocov::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsage = 1,
    kNumerical = 2,
    kGateFailure = 3,
};

/// Runs one CLI invocation. `args` excludes the program name. CSV goes to
/// `out` (or to --output), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "start:stop:step" (inclusive of stop when step divides the span),
/// "a,b,c", or a single value. Throws InvalidArgument on malformed or empty
/// input.
std::vector<double> parse_range(std::string_view spec);

double db_to_linear(double db);

/// Shortest decimal that round-trips the double; locale independent.
std::string format_double(double value);

}  // namespace leocov::cli
