#include "tokeval/unicode.hpp"

#include <algorithm>
#include <stdexcept>

namespace tokeval {

namespace {

bool in_ranges(const std::vector<CodepointRange>& ranges, uint32_t cp) {
    auto it = std::upper_bound(ranges.begin(), ranges.end(), cp,
                               [](uint32_t v, const CodepointRange& r) { return v < r.lo; });
    return it != ranges.begin() && cp <= std::prev(it)->hi;
}

// Returns the codepoint length at `pos`, or 0 if the sequence is malformed.
int decode_one(std::string_view text, size_t pos, uint32_t& cp) {
    const auto byte = [&](size_t i) { return static_cast<uint8_t>(text[i]); };
    const uint8_t b0 = byte(pos);
    if (b0 < 0x80) {
        cp = b0;
        return 1;
    }
    int len;
    uint32_t min_cp;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        min_cp = 0x80;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        min_cp = 0x800;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        min_cp = 0x10000;
        cp = b0 & 0x07;
    } else {
        return 0;
    }
    if (pos + len > text.size()) return 0;
    for (int i = 1; i < len; ++i) {
        const uint8_t b = byte(pos + i);
        if ((b & 0xC0) != 0x80) return 0;
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min_cp) return 0;                    // overlong
    if (cp >= 0xD800 && cp <= 0xDFFF) return 0;   // surrogate
    if (cp > 0x10FFFF) return 0;
    return len;
}

}  // namespace

bool is_letter(uint32_t cp) { return in_ranges(kLetterRanges, cp); }
bool is_number(uint32_t cp) { return in_ranges(kNumberRanges, cp); }
bool is_whitespace(uint32_t cp) { return in_ranges(kWhitespaceRanges, cp); }

std::vector<Codepoint> decode_utf8(std::string_view text) {
    std::vector<Codepoint> out;
    out.reserve(text.size());
    size_t pos = 0;
    while (pos < text.size()) {
        uint32_t cp = 0;
        const int len = decode_one(text, pos, cp);
        if (len == 0) {
            throw std::invalid_argument("malformed UTF-8 at byte offset " + std::to_string(pos));
        }
        out.push_back({cp, static_cast<uint32_t>(pos), static_cast<uint32_t>(len)});
        pos += len;
    }
    return out;
}

bool is_valid_utf8(std::string_view text) {
    size_t pos = 0;
    while (pos < text.size()) {
        uint32_t cp = 0;
        const int len = decode_one(text, pos, cp);
        if (len == 0) return false;
        pos += len;
    }
    return true;
}

std::string sanitize_utf8(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    size_t pos = 0;
    while (pos < text.size()) {
        uint32_t cp = 0;
        const int len = decode_one(text, pos, cp);
        if (len == 0) {
            out += "\xEF\xBF\xBD";  // U+FFFD
            ++pos;
        } else {
            out.append(text.substr(pos, len));
            pos += len;
        }
    }
    return out;
}

bool try_decode_one(std::string_view text, size_t offset, Codepoint& out) {
    if (offset >= text.size()) return false;
    uint32_t cp = 0;
    const int len = decode_one(text, offset, cp);
    if (len == 0) return false;
    out = {cp, static_cast<uint32_t>(offset), static_cast<uint32_t>(len)};
    return true;
}

void append_utf8(std::string& out, uint32_t cp) {
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

}  // namespace tokeval
