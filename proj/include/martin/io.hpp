#pragma once

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core.hpp"

namespace martin::io
{
//! Shortest round-trip decimal form of a double.
inline std::string format_number(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::string format_number(std::uint64_t v)
{
    return std::to_string(v);
}

inline std::string format_number(int v)
{
    return std::to_string(v);
}

inline std::string format_point(Point const& p)
{
    std::string out;
    for (int i = 0; i < p.dim; ++i)
    {
        if (i)
            out += ';';
        out += format_number(p[i]);
    }
    return out;
}

//! RFC 4180 field quoting.
inline std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

/*!
 * Accumulates a CSV table in memory.
 *
 * Leading '#' lines carry provenance (version and resolved config); the
 * table itself follows RFC 4180 with CRLF-free '\n' line ends.
 */
class CsvTable
{
  public:
    explicit CsvTable(std::vector<std::string> header)
        : columns_{header.size()}
    {
        add_row(header);
    }

    void add_comment(std::string_view text)
    {
        comments_ += "# ";
        comments_ += text;
        comments_ += '\n';
    }

    void add_row(std::vector<std::string> const& fields)
    {
        if (fields.size() != columns_)
            throw std::logic_error("CSV row has the wrong column count");
        for (std::size_t i = 0; i < fields.size(); ++i)
        {
            if (i)
                body_ += ',';
            body_ += csv_field(fields[i]);
        }
        body_ += '\n';
    }

    std::string str() const { return comments_ + body_; }

    void write(std::string const& path) const
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + path);
        out << str();
    }

  private:
    std::size_t columns_;
    std::string comments_;
    std::string body_;
};

//! Parse a CSV body (no quoted newlines), skipping '#' comment lines.
inline std::vector<std::vector<std::string>> read_csv(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line))
    {
        if (line.empty() || line.front() == '#')
            continue;
        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i)
        {
            char const c = line[i];
            if (quoted)
            {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"')
                    field += line[++i];
                else if (c == '"')
                    quoted = false;
                else
                    field += c;
            }
            else if (c == '"')
                quoted = true;
            else if (c == ',')
                fields.push_back(std::exchange(field, {}));
            else
                field += c;
        }
        fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

inline std::string read_file(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace martin::io
