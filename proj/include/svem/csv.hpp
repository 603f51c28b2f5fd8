#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace svem::csv {

/// Parsed CSV: header plus string cells. `lines[i]` is the 1-based file line
/// of `rows[i]`, used in diagnostics.
struct Document {
    std::string source;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> lines;

    /// Index of a header column, or -1.
    std::ptrdiff_t column(std::string_view name) const;
};

/// Comma-delimited, optional double quoting, blank lines skipped. Every row
/// must have as many cells as the header.
Document parse(std::string_view text, const std::string& source = "<input>");

Document read(const std::filesystem::path& path);

/// Locale-independent parse of a full cell; throws CsvError naming the cell.
double parse_number(std::string_view cell, const std::string& source, std::size_t row, std::size_t column);

/// Numeric block of the given columns, rows in file order.
Eigen::MatrixXd numeric_columns(const Document& doc, std::span<const std::size_t> columns);

/// Shortest representation that reads back to the same double.
std::string format_number(double value);

std::string escape(std::string_view cell);

/// Joins cells with commas and a trailing newline.
std::string line(std::span<const std::string> cells);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace svem::csv
