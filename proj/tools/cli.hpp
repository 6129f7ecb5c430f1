#pragma once

#include <ostream>

namespace bfree::cli {

/// Exit codes: 0 success, 2 domain or usage error, 3 inconclusive at budget.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace bfree::cli
