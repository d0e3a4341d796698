#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cwplan/constraints.hpp"
#include "cwplan/cw.hpp"

namespace cwplan::io {

/// Parsed scenario file. The subcommand-specific block is kept as a
/// canonical JSON string so public headers stay free of the JSON library.
struct Scenario {
    std::string mode;
    cw::OrbitParams orbit{};
    cw::TransferConfig transfer{};
    std::vector<constraints::PathConstraint> constraint_list;
    std::string params_json = "{}";
    std::string out_dir = "out";

    /// Content fingerprint (FNV-1a of the canonical serialization without
    /// the output location); identical inputs hash identically.
    std::uint64_t hash() const;
};

/// @throws ValidationError on malformed JSON or schema violations.
Scenario parse_scenario(const std::string& json_text);

/// Load a scenario file and apply `--set` style overrides, each
/// "dotted.path=value" with the value parsed as a JSON literal when
/// possible and as a string otherwise.
/// @throws IoError when the file cannot be read; ValidationError on parse
/// or override failure.
Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides = {});

/// Canonical JSON round-trip: parse_scenario(serialize(s)) reproduces s.
std::string serialize(const Scenario& scenario);

} // namespace cwplan::io
