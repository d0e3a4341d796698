#include "cwplan/csv.hpp"

#include <cstdio>
#include <fstream>
#include <utility>

#include "cwplan/errors.hpp"

namespace cwplan::io {

namespace {

std::string sanitize(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out += c;
        }
    }
    out += '"';
    return out;
}

void append_cell(std::string& out, const Cell& cell) {
    char buf[40];
    if (const auto* i = std::get_if<long long>(&cell)) {
        std::snprintf(buf, sizeof buf, "%lld", *i);
        out += buf;
    } else if (const auto* d = std::get_if<double>(&cell)) {
        std::snprintf(buf, sizeof buf, "%.17e", *d);
        out += buf;
    } else {
        out += sanitize(std::get<std::string>(cell));
    }
}

} // namespace

void Dataset::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw IoError("csv row has " + std::to_string(row.size()) +
                      " cells, header has " + std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

std::string render_csv(const Dataset& data) {
    std::string out;
    out.reserve(32 * data.columns.size() * (data.rows.size() + 1));
    for (std::size_t c = 0; c < data.columns.size(); ++c) {
        if (c > 0) {
            out += ',';
        }
        out += sanitize(data.columns[c]);
    }
    out += '\n';
    for (const auto& row : data.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) {
                out += ',';
            }
            append_cell(out, row[c]);
        }
        out += '\n';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open for writing: " + path.string());
    }
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    f.flush();
    if (!f) {
        throw IoError("write failed: " + path.string());
    }
}

void emit_csv(const Dataset& data, const std::filesystem::path& path) {
    write_text_file(path, render_csv(data));
}

} // namespace cwplan::io
