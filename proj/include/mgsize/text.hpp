#pragma once

#include "mgsize/core.hpp"

#include <charconv>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace mgsize::text
{

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v)
{
    if (v == 0.0) {
        return "0"; // also folds -0
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::optional<double> parse_double(std::string_view s)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

inline std::optional<long> parse_long(std::string_view s)
{
    s = trim(s);
    long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

class IoError : public Error
{
  public:
    using Error::Error;
};

/// Error tied to a line of an input file.
class ParseError : public Error
{
  public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line)
    {
    }

    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    out << content;
    if (!out) {
        throw IoError("write failed for '" + path + "'");
    }
}

/// Lines without their terminators; a trailing newline does not add a line.
inline std::vector<std::string_view> lines(std::string_view content)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start < content.size()) {
        auto pos = content.find('\n', start);
        if (pos == std::string_view::npos) {
            pos = content.size();
        }
        auto line = content.substr(start, pos - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        out.push_back(line);
        start = pos + 1;
    }
    return out;
}

/// A CSV file of one header row and numeric data rows.
struct NumericTable
{
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(std::string_view name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return i;
            }
        }
        throw Error("missing column '" + std::string(name) + "'");
    }
};

inline NumericTable parse_numeric_table(std::string_view content, const std::string& source)
{
    const auto ls = lines(content);
    if (ls.empty()) {
        throw ParseError(source, 1, "empty file");
    }
    NumericTable t;
    for (auto h : split(ls[0], ',')) {
        t.header.emplace_back(trim(h));
    }
    for (std::size_t i = 1; i < ls.size(); ++i) {
        if (trim(ls[i]).empty()) {
            continue;
        }
        const auto cells = split(ls[i], ',');
        if (cells.size() != t.header.size()) {
            throw ParseError(source, i + 1,
                             "expected " + std::to_string(t.header.size()) + " fields, got " +
                                 std::to_string(cells.size()));
        }
        std::vector<double> row;
        for (auto c : cells) {
            const auto v = parse_double(c);
            if (!v) {
                throw ParseError(source, i + 1, "not a number: '" + std::string(trim(c)) + "'");
            }
            row.push_back(*v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace mgsize::text
