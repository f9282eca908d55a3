#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bnet::cli {

// Batch front end. Subcommands: validate, compile, query, conflict,
// monitor, surprise, oracle. Returns the process exit code:
//   0  success
//   1  input error (bad files, unknown names, unsatisfiable request)
//   2  internal invariant violation (engine bug guards)
//   3  `conflict` ran successfully and detected a positive global conflict
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace bnet::cli
