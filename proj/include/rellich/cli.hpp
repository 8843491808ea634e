#pragma once

namespace rellich {

/// Batch front-end.  Subcommands: verify-identities, rayleigh, sharpness,
/// classify, criticality, verdict, report.  Writes a JSON report (file or
/// stdout) whose config block is the fully resolved run configuration.
/// Returns 0 when every executed check passes, 2 on any check failure and
/// 1 on usage or configuration errors; never throws.
int run_cli(int argc, const char* const* argv);

}  // namespace rellich
