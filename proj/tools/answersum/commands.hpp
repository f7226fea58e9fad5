#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace answersum::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;    // usage, I/O, parse
inline constexpr int kExitScorerError = 2;  // remote scorer protocol or transport

// Runs the tool with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace answersum::cli
