#pragma once

namespace sdgs::cli {

// Exit codes: 0 success, 2 configuration error, 3 runtime failure.
int run(int argc, const char* const* argv);

}  // namespace sdgs::cli
