#pragma once

// Command-line front end. Subcommands: run, verify, sweep, plot, selftest.
// Exit codes: 0 success, 1 verification failure, 2 usage error.

namespace optbench {

int cli_run(int argc, const char* const* argv);

}  // namespace optbench
