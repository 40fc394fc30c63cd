#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "zk/specfun.hpp"

namespace zk::cli {

/// Parses "a+bi", "a-bi", "bi" or a plain real.
Complex parse_complex(const std::string& text);

/// Runs one subcommand. `args` excludes the program name. Returns 0 on success, 1 when a
/// computation or self-check fails, 2 on bad arguments.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zk::cli
