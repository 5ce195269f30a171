#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "privgen/error.hpp"

namespace privgen {

/// Incremental CSV reader: comma-separated, double-quote quoting with "" as
/// the embedded quote, tolerant of CRLF and a UTF-8 BOM on the first line.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    /// Reads the next row. Returns false at end of input. `line` receives the
    /// 1-based line number on which the row started.
    bool next(std::vector<std::string>& fields, size_t& line) {
        fields.clear();
        int c = in_.get();
        if (c == EOF) return false;
        line = line_;
        if (first_row_) {
            // swallow a UTF-8 BOM
            if (c == 0xEF && in_.peek() == 0xBB) {
                in_.get();
                if (in_.peek() == 0xBF) {
                    in_.get();
                    c = in_.get();
                } else {
                    throw ParseError(line_, "malformed byte-order mark");
                }
            }
            first_row_ = false;
            if (c == EOF) return false;
        }
        std::string field;
        bool quoted = false;
        while (true) {
            if (c == EOF) {
                fields.push_back(std::move(field));
                if (quoted) throw ParseError(line, "unterminated quoted field");
                return true;
            }
            char ch = static_cast<char>(c);
            if (quoted) {
                if (ch == '"') {
                    if (in_.peek() == '"') {
                        in_.get();
                        field += '"';
                    } else {
                        quoted = false;
                    }
                } else {
                    if (ch == '\n') ++line_;
                    field += ch;
                }
            } else if (ch == '"' && field.empty()) {
                quoted = true;
            } else if (ch == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else if (ch == '\n') {
                ++line_;
                if (!field.empty() && field.back() == '\r') field.pop_back();
                fields.push_back(std::move(field));
                return true;
            } else {
                field += ch;
            }
            c = in_.get();
        }
    }

private:
    std::istream& in_;
    size_t line_ = 1;
    bool first_row_ = true;
};

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(fields[i]);
    }
    os << '\n';
}

/// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& text, size_t line, const std::string& column) {
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(line, "cannot parse '" + text + "' as a number in column '" + column + "'");
    return v;
}

}  // namespace privgen
