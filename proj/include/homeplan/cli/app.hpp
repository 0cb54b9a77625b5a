#pragma once

#include "homeplan/cli/settings.hpp"

namespace homeplan::cli {

/// Parses the command line and dispatches to run, evaluate, report-errors or
/// augment. Settings come from flags, then HOMEPLAN_* variables, then the
/// --config JSON file. Returns the process exit code.
int main_entry(int argc, const char* const* argv, Streams io);

}  // namespace homeplan::cli
