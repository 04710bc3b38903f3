#pragma once

// Entry point of the wedgeqm command-line tool, callable in-process.
//
// Exit codes: 0 ok, 1 usage, 2 I/O, 3 computation, 4 check failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace wedge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitComputation = 3;
inline constexpr int kExitCheck = 4;

// Environment variable naming the default output root.
inline constexpr const char* kOutputEnv = "WEDGEQM_OUT";

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wedge::cli
