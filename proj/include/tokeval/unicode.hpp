#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tokeval {

struct CodepointRange {
    uint32_t lo;
    uint32_t hi;
};

// Sorted, disjoint ranges generated from the Unicode character database
// (see scripts/gen_unicode_tables.py).
extern const std::vector<CodepointRange> kLetterRanges;      // general category L*
extern const std::vector<CodepointRange> kNumberRanges;      // general category N*
extern const std::vector<CodepointRange> kWhitespaceRanges;  // \s

bool is_letter(uint32_t cp);
bool is_number(uint32_t cp);
bool is_whitespace(uint32_t cp);

// One decoded scalar value plus the byte span it occupies in the source text.
struct Codepoint {
    uint32_t value;
    uint32_t byte_offset;
    uint32_t byte_length;
};

// Strict UTF-8 decoder: rejects overlong encodings, surrogates and values
// above U+10FFFF. Throws std::invalid_argument on malformed input.
std::vector<Codepoint> decode_utf8(std::string_view text);

bool is_valid_utf8(std::string_view text);

// Replaces each malformed byte with U+FFFD.
std::string sanitize_utf8(std::string_view text);

// Decodes the single codepoint starting at `offset`. Returns false when the
// bytes there are not a well-formed sequence or offset is at the end.
bool try_decode_one(std::string_view text, size_t offset, Codepoint& out);

void append_utf8(std::string& out, uint32_t cp);

}  // namespace tokeval
