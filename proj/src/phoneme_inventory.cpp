#include "evorf/phoneme_inventory.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "evorf/error.hpp"

namespace evorf {

std::string to_string(Language lang) {
    switch (lang) {
        case Language::Japanese: return "japanese";
        case Language::Chinese: return "chinese";
        case Language::Korean: return "korean";
    }
    return "?";
}

Language language_from_string(std::string_view s) {
    if (s == "ja" || s == "japanese") return Language::Japanese;
    if (s == "zh" || s == "chinese") return Language::Chinese;
    if (s == "ko" || s == "korean") return Language::Korean;
    throw ValidationError("unknown language '" + std::string(s) + "' (expected ja, zh, or ko)");
}

int PhonemeInventory::symbol_id(std::string_view s) const {
    auto it = index_.find(std::string(s));
    return it == index_.end() ? -1 : it->second;
}

int PhonemeInventory::tone_count() const {
    int n = 0;
    for (const char t : tone_) n += t != 0;
    return n;
}

const PhonemeInventory::Rule* PhonemeInventory::match(std::string_view text,
                                                      std::size_t pos) const {
    std::size_t limit = std::min(max_rule_bytes_, text.size() - pos);
    for (std::size_t len = limit; len >= 1; --len) {
        auto it = rule_index_.find(std::string(text.substr(pos, len)));
        if (it != rule_index_.end()) return &rules_[it->second];
    }
    return nullptr;
}

namespace {

std::vector<std::string> split_tabs(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

std::vector<std::string> split_commas(std::string_view s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = s.find(',', start);
        if (comma == std::string_view::npos) {
            parts.emplace_back(s.substr(start));
            break;
        }
        parts.emplace_back(s.substr(start, comma - start));
        start = comma + 1;
    }
    return parts;
}

}  // namespace

PhonemeInventory PhonemeInventory::parse(std::string_view text, Language lang,
                                         const std::string& origin) {
    PhonemeInventory inv;
    inv.language_ = lang;

    std::size_t pos = 0;
    long line_no = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;

        const auto fields = split_tabs(line);
        if (fields[0] == "rule") {
            if (fields.size() != 3 || fields[1].empty() || fields[2].empty())
                throw ParseError(origin, line_no, "rule line needs grapheme and symbols");
            Rule rule;
            rule.grapheme = fields[1];
            for (const auto& part : split_commas(fields[2])) {
                const int id = inv.symbol_id(part);
                if (id < 0)
                    throw ValidationError(origin + ":" + std::to_string(line_no) +
                                          ": rule emits undeclared symbol '" + part + "'");
                rule.output.push_back(id);
            }
            if (inv.rule_index_.count(rule.grapheme))
                throw ValidationError(origin + ":" + std::to_string(line_no) +
                                      ": duplicate rule for grapheme '" + rule.grapheme + "'");
            inv.max_rule_bytes_ = std::max(inv.max_rule_bytes_, rule.grapheme.size());
            inv.rule_index_[rule.grapheme] = inv.rules_.size();
            inv.rules_.push_back(std::move(rule));
        } else if (fields[0] == "separator") {
            if (fields.size() != 2 || fields[1].empty())
                throw ParseError(origin, line_no, "separator line needs a grapheme");
            Rule rule;
            rule.grapheme = fields[1];
            if (inv.rule_index_.count(rule.grapheme))
                throw ValidationError(origin + ":" + std::to_string(line_no) +
                                      ": duplicate rule for grapheme '" + rule.grapheme + "'");
            inv.max_rule_bytes_ = std::max(inv.max_rule_bytes_, rule.grapheme.size());
            inv.rule_index_[rule.grapheme] = inv.rules_.size();
            inv.rules_.push_back(std::move(rule));
        } else {
            // symbol declaration
            if (fields.size() > 2 || fields[0].empty() ||
                (fields.size() == 2 && fields[1] != "tone"))
                throw ParseError(origin, line_no, "expected symbol declaration or rule");
            const std::string& sym = fields[0];
            if (inv.index_.count(sym))
                throw ValidationError(origin + ":" + std::to_string(line_no) +
                                      ": duplicate symbol '" + sym + "'");
            const bool tone = fields.size() == 2;
            if (tone && lang != Language::Chinese)
                throw ValidationError(origin + ":" + std::to_string(line_no) +
                                      ": tone symbols are only valid for Chinese");
            inv.index_[sym] = static_cast<int>(inv.symbols_.size());
            inv.symbols_.push_back(sym);
            inv.tone_.push_back(tone ? 1 : 0);
        }
    }

    if (inv.symbols_.empty())
        throw ValidationError(origin + ": inventory declares no symbols");
    if (inv.rules_.empty())
        throw ValidationError(origin + ": inventory declares no rules");
    return inv;
}

PhonemeInventory PhonemeInventory::load(const std::string& path, Language lang) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open inventory file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), lang, path);
}

}  // namespace evorf
