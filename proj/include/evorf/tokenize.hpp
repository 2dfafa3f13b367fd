#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "evorf/phoneme_inventory.hpp"

namespace evorf {

struct TokenSequence {
    std::vector<int> ids;  // indices into the inventory's symbol list
    std::string source;

    std::vector<std::string> symbols(const PhonemeInventory& inv) const;
};

struct FeatureVector {
    std::vector<int> counts;  // one slot per inventory symbol, in order
    bool has_length = false;
    int length = 0;
};

// Katakana → symbols. Each kana (or yōon digraph) emits via the rule table;
// a chōonpu, or a vowel kana repeating the previous vowel, becomes ":".
TokenSequence tokenize_japanese(std::string_view name, const PhonemeInventory& inv);

// Pinyin → symbols. Input must be pre-segmented into syllables by spaces,
// apostrophes, hyphens, or tone digits; each syllable emits its segments plus
// exactly one tone symbol (unmarked → neutral).
TokenSequence tokenize_pinyin(std::string_view name, const PhonemeInventory& inv);

// McCune-Reischauer → symbols. Greedy digraphs; written b/d/g/j count as the
// voiced plosive series; a lone apostrophe is a syllable separator.
TokenSequence tokenize_korean_mr(std::string_view name, const PhonemeInventory& inv);

// Dispatch on the inventory's language.
TokenSequence tokenize(std::string_view name, const PhonemeInventory& inv);

// Occurrence counts per symbol; with_length adds the non-tone token total.
FeatureVector featurize(const TokenSequence& tokens, const PhonemeInventory& inv,
                        bool with_length);

}  // namespace evorf
