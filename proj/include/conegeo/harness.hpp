#pragma once

// Experiment runner: a JSON config names a cone, a map, a task and its
// parameters; the runner validates it, executes the task and writes the
// artifacts. Exit status 0 on success, 2 when the task's hypotheses are not
// met (a DW report on a map with an interior eigenvector), 1 on error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "conegeo/io.hpp"

namespace conegeo::harness {

enum ExitCode : int { kOk = 0, kError = 1, kHypothesesUnmet = 2 };

io::json load_json_file(const std::filesystem::path& path);

/// Config seed, overridden by the CONEGEO_SEED environment variable.
std::uint64_t effective_seed(const io::json& config);

/// Relative paths inside the config resolve against base_dir. Reports go to
/// outputs.json / outputs.csv when given, otherwise to `out`; diagnostics go
/// to `err`.
int run(const io::json& config, const std::filesystem::path& base_dir,
        std::ostream& out, std::ostream& err);

}  // namespace conegeo::harness
