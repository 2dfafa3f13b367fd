#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace evorf {

enum class Language { Japanese, Chinese, Korean };

std::string to_string(Language lang);
Language language_from_string(std::string_view s);  // accepts ja/zh/ko and full names

// A phoneme feature alphabet plus the grapheme rules that produce it.
// Loaded from a data file so the mapping tables can be audited and swapped
// without recompiling. File format (UTF-8, line-oriented, # comments):
//
//   <symbol>[<TAB>tone]              declares a feature symbol, in order
//   rule<TAB><grapheme><TAB>s1[,s2...]   grapheme emits those symbols
//   separator<TAB><grapheme>             grapheme emits nothing, breaks context
//
class PhonemeInventory {
public:
    struct Rule {
        std::string grapheme;
        std::vector<int> output;  // symbol indices; empty for separators
    };

    static PhonemeInventory load(const std::string& path, Language lang);
    static PhonemeInventory parse(std::string_view text, Language lang,
                                  const std::string& origin = "<inventory>");

    Language language() const { return language_; }
    const std::vector<std::string>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    const std::string& symbol(int id) const { return symbols_[static_cast<std::size_t>(id)]; }
    int symbol_id(std::string_view s) const;  // -1 if absent
    bool is_tone(int id) const { return tone_[static_cast<std::size_t>(id)] != 0; }
    int tone_count() const;

    // Longest rule match at byte offset `pos`; nullptr when nothing matches.
    const Rule* match(std::string_view text, std::size_t pos) const;

private:
    Language language_ = Language::Japanese;
    std::vector<std::string> symbols_;
    std::vector<char> tone_;
    std::unordered_map<std::string, int> index_;
    std::vector<Rule> rules_;
    std::unordered_map<std::string, std::size_t> rule_index_;
    std::size_t max_rule_bytes_ = 0;
};

}  // namespace evorf
