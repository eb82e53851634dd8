#pragma once

// Command-line front end. Every run prints deterministic results to `out`
// and writes a JSON run manifest next to its outputs.
//
// Exit codes: 0 ok, 1 usage or input error, 2 invalid length window,
// 3 DGA invariant failure, 4 chord failure rate above 20%, 5 cord
// truncation instability.

#include <ostream>
#include <string>
#include <vector>

namespace strhom::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvalidWindow = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitChordFailures = 4;
inline constexpr int kExitTruncation = 5;

// Manifest directory: --out-dir, else $STRHOM_OUTPUT_DIR, else the working
// directory.
inline constexpr const char* kOutputDirEnv = "STRHOM_OUTPUT_DIR";

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace strhom::cli
