#include "cwplan/manifest.hpp"

#include <cstdio>
#include <ctime>

#include "json.hpp"

#include "cwplan/csv.hpp"
#include "cwplan/errors.hpp"

namespace cwplan::io {

namespace {

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(v));
    return buf;
}

} // namespace

std::string current_utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& dir) {
    nlohmann::json j;
    j["tool_version"] = manifest.tool_version;
    j["subcommand"] = manifest.subcommand;
    j["timestamp"] = manifest.timestamp;
    j["scenario_hash"] = hex64(manifest.scenario_hash);
    nlohmann::json outputs = nlohmann::json::array();
    for (const OutputRecord& rec : manifest.outputs) {
        outputs.push_back({{"path", rec.path},
                           {"checksum_fnv1a64", hex64(rec.checksum)},
                           {"bytes", rec.bytes}});
    }
    j["outputs"] = std::move(outputs);
    j["grids"] = manifest.grids;
    j["tolerances"] = manifest.tolerances;
    write_text_file(dir / "manifest.json", j.dump(2) + "\n");
}

} // namespace cwplan::io
