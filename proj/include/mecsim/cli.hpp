#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mecsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;

/// Entry point of the `mecsim` tool; `args` excludes the program name.
///   run      --preset <name|file.json> [--config <file>] [--reps <n>] [--seed <n>] --out <file>
///   ruin     --initial <x> --premium <x> --mu <x> [--lambda <x>] [--horizon <x>]
///            [--analytic-terms <n> | --paths <n>]
///   solve    --config <file> --out <file> [--seed <n>]
///   validate --config <file>
/// Exit codes: 0 success, 1 usage or configuration error, 2 runtime error.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mecsim
