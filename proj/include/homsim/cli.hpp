#pragma once

namespace homsim::cli {

// Exit codes: 0 success, 2 config/validation error, 3 computation
// error, 4 I/O error.
int run(int argc, const char* const* argv);

}  // namespace homsim::cli
