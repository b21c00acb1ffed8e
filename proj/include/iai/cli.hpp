#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iai::cli {

/// Exit statuses. Higher wins when several apply.
inline constexpr int kOk = 0;
inline constexpr int kFindings = 1;  // validation errors, classification mismatches
inline constexpr int kUsage = 2;     // usage, parse and input errors

/// Runs one command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iai::cli
