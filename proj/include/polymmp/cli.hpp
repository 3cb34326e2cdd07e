#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polymmp {

/** Command dispatch of the batch front end. Subcommands: run, classes,
 *  check, fiber, render. Exit codes: 0 success, 1 usage, 2 schema error,
 *  3 invariant violation, 4 non-ample divisor, 5 internal cross-check
 *  failure. */
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polymmp
