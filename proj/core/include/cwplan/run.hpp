#pragma once

#include <string>
#include <vector>

namespace cwplan::io {

struct RunOptions {
    /// Overrides the scenario's output directory when nonempty.
    std::string out_dir;
    /// "dotted.path=value" scenario edits, applied in order.
    std::vector<std::string> overrides;
};

/// Execute one subcommand against a scenario file, writing CSV outputs and
/// a manifest. Never throws; returns the process exit code:
///   0 success, 2 invalid input, 3 negative result (infeasible,
///   uncertified, unreachable, failed checks), 4 I/O failure, 1 internal.
int run(const std::string& subcommand, const std::string& scenario_path,
        const RunOptions& options = {});

} // namespace cwplan::io
