#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "tokeval/unicode.hpp"

namespace tokeval::testutil {

// ASCII-heavy with whitespace runs; exercises the common scanner paths.
inline std::string random_ascii(std::mt19937& rng, size_t max_len) {
    static constexpr char kPool[] =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
        "'\"!?#$%&()*+,-./:;<=>@[]^_`{|}~ \t\n\r";
    std::uniform_int_distribution<size_t> len_dist(0, max_len);
    std::uniform_int_distribution<size_t> pick(0, sizeof(kPool) - 2);
    std::string out;
    const size_t len = len_dist(rng);
    for (size_t i = 0; i < len; ++i) out.push_back(kPool[pick(rng)]);
    return out;
}

// Valid UTF-8 across scripts, odd whitespace and astral planes.
inline std::string random_utf8(std::mt19937& rng, size_t max_cps) {
    static constexpr uint32_t kSpecials[] = {
        0x00A0, 0x1680, 0x2000, 0x2007, 0x200A, 0x2028, 0x2029, 0x202F,
        0x3000,  // whitespace beyond ASCII
        0x0966, 0x096A, 0x0660, 0x0669, 0x0E50, 0xFF10,  // digits: devanagari,
                                                         // arabic, thai, fullwidth
        0x00E9, 0x00DF, 0x0391, 0x03C9, 0x0416, 0x4E2D, 0x305F, 0xAC00,
        0x017F,  // letters incl. long s
        0x2019, 0x201C, 0x2014, 0x20AC, 0x1F600, 0x1F4A9,  // punct/symbols
    };
    std::uniform_int_distribution<size_t> len_dist(0, max_cps);
    std::uniform_int_distribution<int> kind(0, 99);
    std::uniform_int_distribution<uint32_t> ascii(0x20, 0x7E);
    std::uniform_int_distribution<uint32_t> latin(0x80, 0x7FF);
    std::uniform_int_distribution<uint32_t> bmp(0x800, 0xFFFF);
    std::uniform_int_distribution<uint32_t> astral(0x10000, 0x10FFFF);
    std::uniform_int_distribution<size_t> special(0, std::size(kSpecials) - 1);
    std::uniform_int_distribution<int> ws(0, 3);

    std::string out;
    const size_t len = len_dist(rng);
    for (size_t i = 0; i < len; ++i) {
        const int k = kind(rng);
        uint32_t cp;
        if (k < 45) {
            cp = ascii(rng);
        } else if (k < 60) {
            cp = static_cast<uint32_t>((const uint32_t[]){' ', '\t', '\n', '\r'}[ws(rng)]);
        } else if (k < 75) {
            cp = kSpecials[special(rng)];
        } else if (k < 85) {
            cp = latin(rng);
        } else if (k < 95) {
            do {
                cp = bmp(rng);
            } while (cp >= 0xD800 && cp <= 0xDFFF);
        } else {
            cp = astral(rng);
        }
        append_utf8(out, cp);
    }
    return out;
}

}  // namespace tokeval::testutil
