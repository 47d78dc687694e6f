#pragma once

// Minimal CSV machinery shared by the ingest loaders and export writers:
// header-indexed row access, quoted-field handling, '#' comment lines, and
// strict number parsing that names the offending line.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace dynbench {

class ParseError : public std::runtime_error {
   public:
    ParseError(const std::filesystem::path& file, std::size_t line, const std::string& what)
        : std::runtime_error(file.string() + ":" + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const { return line_; }

   private:
    std::size_t line_;
};

namespace csv {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

inline std::vector<std::string> split_row(std::string_view line, const std::filesystem::path& path,
                                          std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"') {
                if (k + 1 < line.size() && line[k + 1] == '"') {
                    cur += '"';
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw ParseError(path, line_no, "unterminated quoted field");
    fields.push_back(std::move(cur));
    return fields;
}

// Whole-file CSV with a required header row. Blank lines and '#' comment
// lines are skipped; row indices reported in errors are 1-based file lines.
class Table {
   public:
    explicit Table(const std::filesystem::path& path) : path_(path) {
        const std::string text = read_file(path);
        std::size_t start = 0;
        std::size_t line_no = 0;
        bool have_header = false;
        while (start <= text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string::npos) end = text.size();
            std::string_view line(text.data() + start, end - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            ++line_no;
            const std::size_t next = end + 1;
            if (!line.empty() && line[0] != '#') {
                if (!have_header) {
                    header_ = split_row(line, path, line_no);
                    have_header = true;
                } else {
                    auto row = split_row(line, path, line_no);
                    if (row.size() != header_.size())
                        throw ParseError(path_, line_no,
                                         "expected " + std::to_string(header_.size()) +
                                             " fields, got " + std::to_string(row.size()));
                    rows_.push_back(std::move(row));
                    row_lines_.push_back(line_no);
                }
            }
            if (end == text.size()) break;
            start = next;
        }
        if (!have_header) throw ParseError(path, 1, "missing header row");
    }

    const std::filesystem::path& path() const { return path_; }
    const std::vector<std::string>& header() const { return header_; }
    std::size_t row_count() const { return rows_.size(); }
    std::size_t line_of(std::size_t row) const { return row_lines_[row]; }
    const std::vector<std::string>& row(std::size_t r) const { return rows_[r]; }

    std::optional<std::size_t> find_column(std::string_view name) const {
        for (std::size_t k = 0; k < header_.size(); ++k)
            if (header_[k] == name) return k;
        return std::nullopt;
    }

    std::size_t require_column(std::string_view name) const {
        if (auto idx = find_column(name)) return *idx;
        throw ParseError(path_, 1, "missing required column '" + std::string(name) + "'");
    }

    const std::string& field(std::size_t row, std::size_t col) const { return rows_[row][col]; }

    double number(std::size_t row, std::size_t col) const {
        const std::string& text = rows_[row][col];
        double value = 0.0;
        const auto* begin = text.data();
        const auto* end = begin + text.size();
        const auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr != end)
            throw ParseError(path_, row_lines_[row],
                             "column '" + header_[col] + "': not a number: '" + text + "'");
        return value;
    }

    std::int64_t integer(std::size_t row, std::size_t col) const {
        const std::string& text = rows_[row][col];
        std::int64_t value = 0;
        const auto* begin = text.data();
        const auto* end = begin + text.size();
        const auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr != end)
            throw ParseError(path_, row_lines_[row],
                             "column '" + header_[col] + "': not an integer: '" + text + "'");
        return value;
    }

    bool boolean(std::size_t row, std::size_t col) const {
        const std::string& text = rows_[row][col];
        if (text == "true") return true;
        if (text == "false") return false;
        throw ParseError(path_, row_lines_[row],
                         "column '" + header_[col] + "': expected true/false, got '" + text + "'");
    }

   private:
    std::filesystem::path path_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::size_t> row_lines_;
};

// Shortest round-trip decimal form of a double.
inline std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

inline std::string quote_if_needed(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

class Writer {
   public:
    explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open file for writing: " + path.string());
    }

    void comment(std::string_view text) { out_ << "# " << text << "\n"; }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t k = 0; k < fields.size(); ++k) {
            if (k) out_ << ',';
            out_ << quote_if_needed(fields[k]);
        }
        out_ << '\n';
    }

   private:
    std::ofstream out_;
};

}  // namespace csv
}  // namespace dynbench
