#include "evorf/tokenize.hpp"

#include <array>
#include <cctype>

#include "evorf/error.hpp"
#include "evorf/utf8.hpp"

namespace evorf {

std::vector<std::string> TokenSequence::symbols(const PhonemeInventory& inv) const {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (const int id : ids) out.push_back(inv.symbol(id));
    return out;
}

namespace {

[[noreturn]] void unknown_grapheme(std::string_view name, std::string_view folded,
                                   std::size_t byte_pos) {
    // Report the position in codepoints of the folded text; close enough to
    // the original for locating the problem.
    const std::size_t cp = utf8::length(folded.substr(0, byte_pos)) + 1;
    std::size_t p = byte_pos;
    const char32_t bad = utf8::decode(folded, p);
    std::string shown;
    if (bad != utf8::kInvalid) utf8::append(shown, bad);
    throw DataError("unknown grapheme '" + shown + "' at position " + std::to_string(cp) +
                    " in name '" + std::string(name) + "'");
}

void require_nonempty(std::string_view name) {
    if (name.empty()) throw DataError("cannot tokenize an empty name");
}

// Whitespace always separates; inventories only need separator rules for
// visible characters (middle dots, hyphens, apostrophes).
bool is_space_cp(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == 0x3000 || cp == U'\r' || cp == U'\n';
}

}  // namespace

TokenSequence tokenize_japanese(std::string_view name, const PhonemeInventory& inv) {
    require_nonempty(name);
    const std::string text = utf8::fold_string(name);

    std::array<int, 5> vowel_ids{};
    const char* vowels[5] = {"a", "i", "u", "e", "o"};
    for (int v = 0; v < 5; ++v) vowel_ids[static_cast<std::size_t>(v)] = inv.symbol_id(vowels[v]);
    const int long_id = inv.symbol_id(":");

    auto vowel_slot = [&](int id) {
        for (int v = 0; v < 5; ++v)
            if (id >= 0 && vowel_ids[static_cast<std::size_t>(v)] == id) return v;
        return -1;
    };

    TokenSequence seq;
    seq.source = std::string(name);
    int prev_vowel = -1;  // id of the most recent open vowel, -1 when broken
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t ahead = pos;
        if (is_space_cp(utf8::decode(text, ahead))) {
            prev_vowel = -1;
            pos = ahead;
            continue;
        }
        const auto* rule = inv.match(text, pos);
        if (!rule) unknown_grapheme(name, text, pos);
        pos += rule->grapheme.size();
        if (rule->output.empty()) {  // separator
            prev_vowel = -1;
            continue;
        }
        // A single repeated vowel is the tail of a long vowel.
        if (rule->output.size() == 1 && rule->output[0] == prev_vowel &&
            vowel_slot(rule->output[0]) >= 0) {
            if (long_id < 0)
                throw ValidationError("inventory lacks the ':' long-vowel symbol");
            seq.ids.push_back(long_id);
            continue;
        }
        for (const int id : rule->output) seq.ids.push_back(id);
        const int last = rule->output.back();
        if (vowel_slot(last) >= 0) {
            prev_vowel = last;
        } else if (last != long_id) {  // ":" keeps the current vowel open
            prev_vowel = -1;
        }
    }
    return seq;
}

namespace {

struct TonedVowel {
    char32_t base;
    int tone;
};

// Pinyin tone diacritics → plain vowel + tone number.
bool detone(char32_t cp, TonedVowel& out) {
    switch (cp) {
        case U'ā': out = {U'a', 1}; return true;
        case U'á': out = {U'a', 2}; return true;
        case U'ǎ': out = {U'a', 3}; return true;
        case U'à': out = {U'a', 4}; return true;
        case U'ē': out = {U'e', 1}; return true;
        case U'é': out = {U'e', 2}; return true;
        case U'ě': out = {U'e', 3}; return true;
        case U'è': out = {U'e', 4}; return true;
        case U'ī': out = {U'i', 1}; return true;
        case U'í': out = {U'i', 2}; return true;
        case U'ǐ': out = {U'i', 3}; return true;
        case U'ì': out = {U'i', 4}; return true;
        case U'ō': out = {U'o', 1}; return true;
        case U'ó': out = {U'o', 2}; return true;
        case U'ǒ': out = {U'o', 3}; return true;
        case U'ò': out = {U'o', 4}; return true;
        case U'ū': out = {U'u', 1}; return true;
        case U'ú': out = {U'u', 2}; return true;
        case U'ǔ': out = {U'u', 3}; return true;
        case U'ù': out = {U'u', 4}; return true;
        case U'ǖ': out = {U'ü', 1}; return true;
        case U'ǘ': out = {U'ü', 2}; return true;
        case U'ǚ': out = {U'ü', 3}; return true;
        case U'ǜ': out = {U'ü', 4}; return true;
        default: return false;
    }
}

struct ToneSymbols {
    std::array<int, 5> id;  // index 0 = tone_level ... 4 = tone_neutral
};

ToneSymbols tone_symbols(const PhonemeInventory& inv) {
    const char* names[5] = {"tone_level", "tone_rising", "tone_dipping", "tone_falling",
                            "tone_neutral"};
    ToneSymbols t{};
    for (int i = 0; i < 5; ++i) {
        const int id = inv.symbol_id(names[i]);
        if (id < 0 || !inv.is_tone(id))
            throw ValidationError(std::string("Chinese inventory must declare tone symbol '") +
                                  names[i] + "'");
        t.id[static_cast<std::size_t>(i)] = id;
    }
    return t;
}

bool is_vowel_symbol(const PhonemeInventory& inv, int id) {
    const std::string& s = inv.symbol(id);
    return s == "a" || s == "e" || s == "i" || s == "o" || s == "u" || s == "y";
}

void parse_pinyin_syllable(std::string_view original_name, const std::string& chunk,
                           const PhonemeInventory& inv, const ToneSymbols& tones,
                           TokenSequence& seq) {
    // Strip the tone: either a diacritic vowel or a trailing digit.
    std::string plain;
    int tone = 0;
    std::size_t pos = 0;
    while (pos < chunk.size()) {
        const char32_t cp = utf8::decode(chunk, pos);
        TonedVowel tv{};
        if (detone(cp, tv)) {
            if (tone != 0)
                throw DataError("syllable '" + chunk + "' in name '" +
                                std::string(original_name) + "' carries two tone marks");
            tone = tv.tone;
            utf8::append(plain, tv.base);
        } else if (cp >= U'0' && cp <= U'5' && pos == chunk.size()) {
            const int digit = static_cast<int>(cp - U'0');
            if (tone != 0)
                throw DataError("syllable '" + chunk + "' in name '" +
                                std::string(original_name) + "' carries two tone marks");
            tone = digit == 0 ? 5 : digit;
        } else {
            utf8::append(plain, cp);
        }
    }
    if (tone == 0) tone = 5;  // unmarked → neutral
    if (plain.empty())
        throw DataError("empty syllable in name '" + std::string(original_name) + "'");

    const std::size_t start = seq.ids.size();
    pos = 0;
    while (pos < plain.size()) {
        const auto* rule = inv.match(plain, pos);
        if (!rule || rule->output.empty())
            throw DataError("cannot parse syllable '" + chunk + "' in name '" +
                            std::string(original_name) + "'");
        pos += rule->grapheme.size();
        for (const int id : rule->output) seq.ids.push_back(id);
    }

    // One syllable must contain exactly one vowel run; more means the input
    // was not segmented and the parse would be garbage.
    int runs = 0;
    bool in_run = false;
    for (std::size_t i = start; i < seq.ids.size(); ++i) {
        const bool v = is_vowel_symbol(inv, seq.ids[i]);
        if (v && !in_run) ++runs;
        in_run = v;
    }
    if (runs != 1)
        throw DataError("'" + chunk + "' in name '" + std::string(original_name) +
                        "' is not a single pinyin syllable (found " + std::to_string(runs) +
                        " vowel groups); segment syllables with spaces or tone digits");

    seq.ids.push_back(tones.id[static_cast<std::size_t>(tone - 1)]);
}

}  // namespace

TokenSequence tokenize_pinyin(std::string_view name, const PhonemeInventory& inv) {
    require_nonempty(name);
    const std::string text = utf8::fold_string(name);
    const ToneSymbols tones = tone_symbols(inv);

    TokenSequence seq;
    seq.source = std::string(name);
    std::string chunk;
    std::size_t pos = 0;
    auto flush = [&] {
        if (!chunk.empty()) {
            parse_pinyin_syllable(name, chunk, inv, tones, seq);
            chunk.clear();
        }
    };
    while (pos < text.size()) {
        std::size_t next = pos;
        const char32_t cp = utf8::decode(text, next);
        if (is_space_cp(cp) || cp == U'\'' || cp == U'-' || cp == U'.') {
            flush();
        } else if (cp >= U'0' && cp <= U'5') {
            // A tone digit closes its syllable.
            chunk.append(text, pos, next - pos);
            flush();
        } else {
            chunk.append(text, pos, next - pos);
        }
        pos = next;
    }
    flush();
    return seq;
}

TokenSequence tokenize_korean_mr(std::string_view name, const PhonemeInventory& inv) {
    require_nonempty(name);
    const std::string text = utf8::fold_string(name);

    TokenSequence seq;
    seq.source = std::string(name);
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t ahead = pos;
        if (is_space_cp(utf8::decode(text, ahead))) {
            pos = ahead;
            continue;
        }
        const auto* rule = inv.match(text, pos);
        if (!rule) unknown_grapheme(name, text, pos);
        pos += rule->grapheme.size();
        for (const int id : rule->output) seq.ids.push_back(id);
    }
    return seq;
}

TokenSequence tokenize(std::string_view name, const PhonemeInventory& inv) {
    switch (inv.language()) {
        case Language::Japanese: return tokenize_japanese(name, inv);
        case Language::Chinese: return tokenize_pinyin(name, inv);
        case Language::Korean: return tokenize_korean_mr(name, inv);
    }
    throw ValidationError("inventory has no language");
}

FeatureVector featurize(const TokenSequence& tokens, const PhonemeInventory& inv,
                        bool with_length) {
    FeatureVector fv;
    fv.counts.assign(inv.size(), 0);
    for (const int id : tokens.ids) ++fv.counts[static_cast<std::size_t>(id)];
    if (with_length) {
        fv.has_length = true;
        fv.length = 0;
        for (std::size_t i = 0; i < inv.size(); ++i) {
            if (!inv.is_tone(static_cast<int>(i))) fv.length += fv.counts[i];
        }
    }
    return fv;
}

}  // namespace evorf
