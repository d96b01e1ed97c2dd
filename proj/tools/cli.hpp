#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pmrc::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kInfeasible = 3;
inline constexpr int kCorrupt = 4;
inline constexpr int kBlocked = 5;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pmrc::cli
