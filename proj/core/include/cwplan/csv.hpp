#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace cwplan::io {

using Cell = std::variant<long long, double, std::string>;

/// Column-checked tabular data destined for a CSV file.
struct Dataset {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    /// @throws IoError when the row arity differs from the header.
    void add_row(std::vector<Cell> row);
};

/// Deterministic rendering: doubles as %.17e (value-preserving), integers
/// as %lld, strings quoted only when they contain a delimiter; \n line
/// endings.
std::string render_csv(const Dataset& data);

/// @throws IoError when the file cannot be created or written.
void write_text_file(const std::filesystem::path& path,
                     const std::string& text);

void emit_csv(const Dataset& data, const std::filesystem::path& path);

} // namespace cwplan::io
