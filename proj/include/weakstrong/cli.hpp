#pragma once

#include <ostream>

namespace weakstrong::cli {

// Exit codes: 0 success, 1 check exceedance, 2 usage or validation error,
// 3 computational failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace weakstrong::cli
