#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fairsample {

/// Command-line front end. `args` excludes the program name. Returns the
/// process exit code: 0 on success, 1 on validation errors, 2 on runtime
/// errors; diagnostics go to `err` as a single line.
int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err);

}  // namespace fairsample
