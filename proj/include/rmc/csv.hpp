#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rmc/error.hpp"

namespace rmc::csv
{

using Row = std::vector<std::string>;

// Minimal RFC 4180 reader: comma separated, double-quote escaping, CRLF or LF
// line endings. Blank lines are skipped.
inline std::vector<Row> parse(std::string_view text)
{
    std::vector<Row> rows;
    Row row;
    std::string field;
    bool quoted = false;
    bool fieldStarted = false;
    std::size_t line = 1;

    auto endField = [&] {
        row.push_back(std::move(field));
        field.clear();
        fieldStarted = false;
    };
    auto endRow = [&] {
        if (fieldStarted || !row.empty())
            endField();
        bool blank = row.size() == 1 && row.front().empty();
        if (!row.empty() && !blank)
            rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n')
                    ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty())
                throw Error(ErrorCode::Parse, "csv line " + std::to_string(line) + ": stray quote");
            quoted = true;
            fieldStarted = true;
            break;
        case ',':
            endField();
            fieldStarted = true;
            break;
        case '\r':
            break;
        case '\n':
            endRow();
            ++line;
            break;
        default:
            field.push_back(c);
            fieldStarted = true;
        }
    }
    if (quoted)
        throw Error(ErrorCode::Parse, "csv: unterminated quoted field");
    endRow();
    return rows;
}

inline std::string escape(std::string_view value)
{
    if (value.find_first_of(",\"\n\r") == std::string_view::npos)
        return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"')
            out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

} // namespace rmc::csv
