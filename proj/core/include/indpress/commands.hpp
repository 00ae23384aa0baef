#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "indpress/system_file.hpp"

namespace indpress {

// Dispatch one CLI subcommand (pressure, induced, bs-dim, gibbs,
// variational-check, definitional, r-diagnostic, info) against a parsed
// system.  The report goes to `out` only on success; on failure a single
// "error: <category>: ..." line goes to `err` and nothing to `out`.
// Returns 0 on success, 1 on computation errors, 2 on usage/validation
// errors.
int run_command(const std::string& command,
                const std::vector<std::string>& args, const SystemFile& system,
                std::ostream& out, std::ostream& err);

}  // namespace indpress
