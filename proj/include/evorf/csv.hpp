#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace evorf::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    // Column index by header name, or -1.
    int column(std::string_view name) const;
};

// Reads an RFC 4180-style CSV file: quoted fields, embedded commas/newlines,
// doubled quotes, CRLF or LF line endings, optional UTF-8 BOM. The first
// record is the header. Throws ParseError on structural problems (unclosed
// quote, ragged row).
Table read_file(const std::string& path);

// Same grammar, from an in-memory buffer. `origin` labels errors.
Table read_string(std::string_view text, const std::string& origin = "<string>");

// Quotes a field only when needed (comma, quote, newline, leading/trailing
// space).
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

}  // namespace evorf::csv
