#include "evorf/csv.hpp"

#include <fstream>
#include <sstream>

#include "evorf/error.hpp"

namespace evorf::csv {

int Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

namespace {

// One pass over the whole buffer; tracks the line number of each record start
// so errors point at the right place.
Table parse(std::string_view text, const std::string& origin) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    Table table;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool record_has_data = false;
    long line = 1;
    long record_line = 1;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        if (table.header.empty()) {
            table.header = std::move(record);
        } else {
            if (record.size() != table.header.size()) {
                throw ParseError(origin, record_line,
                                 "expected " + std::to_string(table.header.size()) +
                                     " fields, got " + std::to_string(record.size()));
            }
            table.rows.push_back(std::move(record));
        }
        record.clear();
        record_has_data = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n') ++line;
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field.empty()) {
                    in_quotes = true;
                    record_has_data = true;
                } else {
                    field.push_back(c);  // stray quote mid-field, keep it
                }
                break;
            case ',':
                end_field();
                record_has_data = true;
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') break;  // CRLF
                [[fallthrough]];
            case '\n':
                if (record_has_data || !field.empty() || !record.empty()) end_record();
                record_line = line;
                break;
            default:
                field.push_back(c);
                record_has_data = true;
                break;
        }
    }
    if (in_quotes) throw ParseError(origin, record_line, "unterminated quoted field");
    if (record_has_data || !field.empty() || !record.empty()) end_record();
    return table;
}

}  // namespace

Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

Table read_string(std::string_view text, const std::string& origin) {
    return parse(text, origin);
}

std::string escape(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\n\r") != std::string_view::npos ||
        (!field.empty() && (field.front() == ' ' || field.back() == ' '));
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(fields[i]);
    }
    return out;
}

}  // namespace evorf::csv
