#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace safpat::cli {

/// Exit codes.
enum Exit : int {
    kOk = 0,
    kModelError = 1,
    kIoError = 2,
    kIncomplete = 3,
    kSearchCap = 4,
};

/// Runs one command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace safpat::cli
