#pragma once

#include <ostream>

namespace msent::cli {

// Exit codes: 0 ok, 1 verification failure, 2 usage or configuration,
// 3 representation, 4 I/O.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace msent::cli
