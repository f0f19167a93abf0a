#pragma once

namespace cachenet {

// Entry point of the command-line tool, callable in-process (used by the
// test suites to exercise the exact CLI surface).
int cli_main(int argc, const char* const* argv);

}  // namespace cachenet
