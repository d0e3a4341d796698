#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace cwplan::io {

struct OutputRecord {
    std::string path;           ///< relative to the output directory
    std::uint64_t checksum = 0; ///< FNV-1a 64 of the file bytes
    std::uint64_t bytes = 0;
};

/// Provenance record of one tool invocation. The timestamp is the only
/// non-reproducible field and lives nowhere else, so data files stay
/// byte-identical across reruns.
struct RunManifest {
    std::string tool_version;
    std::string subcommand;
    std::string timestamp;  ///< ISO-8601 UTC
    std::uint64_t scenario_hash = 0;
    std::vector<OutputRecord> outputs;
    std::map<std::string, double> grids;       ///< resolutions used
    std::map<std::string, double> tolerances;  ///< decision thresholds used
};

std::string current_utc_timestamp();

/// Write <dir>/manifest.json. The manifest lists every other output file;
/// it never lists itself (it cannot carry its own checksum).
/// @throws IoError when the file cannot be written.
void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& dir);

} // namespace cwplan::io
