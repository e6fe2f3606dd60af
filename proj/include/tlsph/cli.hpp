#pragma once

namespace tlsph
{
/// Exit codes of the command-line driver.
enum ExitCode : int
{
    exit_success = 0,
    exit_usage = 1,
    exit_config = 2,
    exit_numerical = 3,
    exit_tolerance = 4
};

/** Verbs: `run <config>`, `list`, `check <config>`; option `--threads N`. */
int cli_main(int argc, char **argv);
} // namespace tlsph
