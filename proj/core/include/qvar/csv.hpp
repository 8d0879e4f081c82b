#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qvar::csv {

/// A parsed CSV document: one header row plus data rows of raw fields.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column, or throws std::invalid_argument naming it.
    [[nodiscard]] std::size_t column(std::string_view name) const;
    [[nodiscard]] bool has_column(std::string_view name) const;
};

/// RFC 4180 parsing: quoted fields, doubled quotes, embedded newlines, CRLF.
[[nodiscard]] Table parse(std::string_view text);

/// Reads and parses a file; throws std::system_error when it cannot be opened.
[[nodiscard]] Table read_file(const std::filesystem::path& path);

/// Reads the `value` column (or the sole column) of a CSV as doubles.
[[nodiscard]] std::vector<double> read_values(const std::filesystem::path& path);

/// Shortest round-trip decimal representation.
[[nodiscard]] std::string format(double x);

/// Writes one row, quoting fields that need it; `\n` line ending.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Writes a single-column CSV with header `value`.
void write_values(const std::filesystem::path& path, const std::vector<double>& values);

}  // namespace qvar::csv
