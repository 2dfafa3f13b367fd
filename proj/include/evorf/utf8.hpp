#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace evorf::utf8 {

// Minimal UTF-8 handling: the tokenizer matches rules at the byte level and
// only needs codepoint iteration for validation, error messages, and case
// folding of romanized input. No normalization is attempted; inventory files
// and input are expected to use precomposed (NFC) forms.

inline constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes the codepoint starting at byte offset `pos`, advancing `pos` past
// it. Returns kInvalid (and advances by one byte) on malformed input.
inline char32_t decode(std::string_view s, std::size_t& pos) {
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    const unsigned char b0 = byte(pos);
    if (b0 < 0x80) {
        ++pos;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++pos;
        return kInvalid;
    }
    if (pos + static_cast<std::size_t>(len) > s.size()) {
        ++pos;
        return kInvalid;
    }
    for (int i = 1; i < len; ++i) {
        const unsigned char bi = byte(pos + static_cast<std::size_t>(i));
        if ((bi & 0xC0) != 0x80) {
            ++pos;
            return kInvalid;
        }
        cp = (cp << 6) | (bi & 0x3F);
    }
    pos += static_cast<std::size_t>(len);
    return cp;
}

inline void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::size_t length(std::string_view s) {
    std::size_t n = 0, pos = 0;
    while (pos < s.size()) {
        decode(s, pos);
        ++n;
    }
    return n;
}

// Lowercases ASCII letters plus the uppercase Latin diacritic forms that occur
// in romanized names (pinyin tone vowels, breves, umlauts). Other codepoints
// pass through unchanged.
inline char32_t fold(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 32;
    switch (cp) {
        case U'À': case U'Á': case U'Â': case U'Ã': case U'Ä':
        case U'È': case U'É': case U'Ê': case U'Ë':
        case U'Ì': case U'Í': case U'Î': case U'Ï':
        case U'Ò': case U'Ó': case U'Ô': case U'Õ': case U'Ö':
        case U'Ù': case U'Ú': case U'Û': case U'Ü':
            return cp + 32;  // Latin-1 uppercase block is offset by 32
        case U'Ā': return U'ā';
        case U'Ē': return U'ē';
        case U'Ī': return U'ī';
        case U'Ō': return U'ō';
        case U'Ū': return U'ū';
        case U'Ă': return U'ă';
        case U'Ĕ': return U'ĕ';
        case U'Ŏ': return U'ŏ';
        case U'Ŭ': return U'ŭ';
        case U'Ǎ': return U'ǎ';
        case U'Ě': return U'ě';
        case U'Ǐ': return U'ǐ';
        case U'Ǒ': return U'ǒ';
        case U'Ǔ': return U'ǔ';
        case U'Ǖ': return U'ǖ';
        case U'Ǘ': return U'ǘ';
        case U'Ǚ': return U'ǚ';
        case U'Ǜ': return U'ǜ';
        default: return cp;
    }
}

inline std::string fold_string(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    while (pos < s.size()) {
        const char32_t cp = decode(s, pos);
        if (cp == kInvalid) continue;
        append(out, fold(cp));
    }
    return out;
}

}  // namespace evorf::utf8
