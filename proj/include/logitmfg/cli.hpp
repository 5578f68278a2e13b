#pragma once

namespace logitmfg {

// Exit codes: 0 success, 1 solver failure (including NotConverged),
// 2 configuration errors.
int run_command(int argc, const char* const* argv);

}  // namespace logitmfg
