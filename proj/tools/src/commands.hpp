#pragma once

#include <ostream>

namespace curvjac::cli {

/// Exit codes: 0 success / property holds, 1 analyzed and property fails,
/// 2 invalid input or flags.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace curvjac::cli
