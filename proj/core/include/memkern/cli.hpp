#pragma once

namespace memkern {

/// Entry point of the `memkern` tool, callable in-process for testing.
/// Returns 0 on success, 1 on usage/configuration/runtime errors, 2 when a
/// verify run completes but a check fails.
int cli_main(int argc, const char* const* argv);

}  // namespace memkern
