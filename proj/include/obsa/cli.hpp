#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace obsa {

/// Runs one CLI command. args excludes the program name.
///
/// Exit codes: 0 success, 2 input/usage error, 3 observability requirement
/// failed, 4 analytic assumption violated.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

/// %.9g with the C locale (plain '.' decimal separator); "inf"/"nan" for
/// non-finite values.
std::string format_g9(double v);

}  // namespace obsa
