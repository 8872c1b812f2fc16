#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace aplab {

struct RunOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_override;
    int threads = 0; // 0 keeps the runtime default
};

// Batch experiment runner.  Reads a JSON config, runs the experiment named
// by its "command" key, writes CSV tables plus a run manifest to the output
// directory.  Exit status: 0 success, 1 validation error, 2 bound-check
// failure, 3 refinement budget exhausted.
int run_experiment(const RunOptions& opts);

} // namespace aplab
