#pragma once

#include <iosfwd>

namespace bgi {

inline constexpr int exit_success = 0;
inline constexpr int exit_internal = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_refused = 3;

// bgiopt entry point: optimize | enumerate | convergence | simulate |
// subdivide | generate. Files go only under --out; progress and timing go
// to `out`, diagnostics to `err`.
int run_cli(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

} // namespace bgi
