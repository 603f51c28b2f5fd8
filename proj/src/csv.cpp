#include "svem/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "svem/error.hpp"

namespace svem::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_line(std::string_view text, const std::string& source, std::size_t line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            cells.push_back(was_quoted ? cell : std::string(trim(cell)));
            cell.clear();
            was_quoted = false;
        } else {
            cell.push_back(c);
        }
    }
    if (quoted) throw CsvError(source, line, cells.size() + 1, "unterminated quoted field");
    cells.push_back(was_quoted ? cell : std::string(trim(cell)));
    return cells;
}

}  // namespace

std::ptrdiff_t Document::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<std::ptrdiff_t>(i);
    return -1;
}

Document parse(std::string_view text, const std::string& source) {
    Document doc;
    doc.source = source;
    std::size_t line_no = 0;
    bool have_header = false;
    while (!text.empty()) {
        const std::size_t end = text.find('\n');
        std::string_view raw = text.substr(0, end);
        text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        if (trim(raw).empty()) continue;

        auto cells = split_line(raw, source, line_no);
        if (!have_header) {
            doc.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != doc.header.size())
            throw CsvError(source, line_no, std::min(cells.size(), doc.header.size()) + 1,
                           "expected " + std::to_string(doc.header.size()) + " columns, found " +
                               std::to_string(cells.size()));
        doc.rows.push_back(std::move(cells));
        doc.lines.push_back(line_no);
    }
    if (!have_header) throw CsvError(source, 1, 1, "missing header row");
    return doc;
}

Document read(const std::filesystem::path& path) { return parse(read_file(path), path.string()); }

double parse_number(std::string_view cell, const std::string& source, std::size_t row, std::size_t column) {
    std::string_view s = trim(cell);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw CsvError(source, row, column, "'" + std::string(cell) + "' is not a number");
    return value;
}

Eigen::MatrixXd numeric_columns(const Document& doc, std::span<const std::size_t> columns) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(doc.rows.size()), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t r = 0; r < doc.rows.size(); ++r)
        for (std::size_t c = 0; c < columns.size(); ++c)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_number(doc.rows[r][columns[c]], doc.source, doc.lines[r], columns[c] + 1);
    return out;
}

std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw Error("failed to format number");
    return std::string(buf, ptr);
}

std::string escape(std::string_view cell) {
    if (cell.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(cell);
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string line(std::span<const std::string> cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(cells[i]);
    }
    out.push_back('\n');
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot move output into place at " + path.string() + ": " + ec.message());
    }
}

}  // namespace svem::csv
