#pragma once

#include <iosfwd>

namespace optoent::cli {

// Exit codes of the optoent tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitUnstable = 3;
inline constexpr int kExitIo = 4;
inline constexpr int kExitValidation = 5;

/// Entry point behind main(); data goes to `out`, logs to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace optoent::cli
