#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "asymcomp/classifier.hpp"

namespace asymcomp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 64;

/// Parses "id = expression" lines; blank lines and '#' comments are skipped.
std::vector<NamedFn> parse_function_list(std::string_view text);
std::vector<NamedFn> read_function_list(const std::string& path);

/// Parses "x=1.5,y=2".
VarValues parse_bindings(std::string_view text);

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace asymcomp::cli
