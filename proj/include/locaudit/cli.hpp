#pragma once

#include <string>

#include "locaudit/support.hpp"

namespace locaudit {

/// Parses a context-policy spec: a named preset (uniform, none, d1b1, d1b2,
/// d2b1, d2b2) or nine comma-separated weights in row-major context order
/// (D1,B1), (D1,B2), (D1,none), (D2,B1), ... (none,none). Throws
/// InvalidPolicy on anything else.
ContextPolicy parse_policy(const std::string& spec);

/// Entry point behind main(). Dispatches the derive / verify / sample /
/// audit subcommands and maps failures onto the exit-code contract:
/// 0 success, 1 I/O or parse failure, 2 no feasible configuration,
/// 3 verification failure or verdict mismatch, 64 usage error.
int cli_main(int argc, const char* const* argv);

}  // namespace locaudit
