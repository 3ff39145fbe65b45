#include "tokeval/pretokenize.hpp"

#include <array>
#include <cassert>
#include <stdexcept>

#include "tokeval/errors.hpp"
#include "tokeval/unicode.hpp"

namespace tokeval {

namespace {

const std::array<std::string, 5> kNames = {"no", "ws", "_ws", "gpt2", "llama3"};

const std::array<std::string, 5> kPatterns = {
    "",
    R"(\s+)",
    R"(\s+(?!\S)|\s+)",
    R"('s|'t|'re|'ve|'m|'ll|'d| ?\p{L}+| ?\p{N}+| ?[^\s\p{L}\p{N}]+|\s+(?!\S)|\s+)",
    R"((?i:'s|'t|'re|'ve|'m|'ll|'d)|[^\r\n\p{L}\p{N}]?\p{L}+|\p{N}{1,3}| ?[^\s\p{L}\p{N}]+[\r\n]*|\s*[\r\n]+|\s+(?!\S)|\s+)",
};

using Cps = std::vector<Codepoint>;

size_t whitespace_run_end(const Cps& cps, size_t i) {
    size_t j = i;
    while (j < cps.size() && is_whitespace(cps[j].value)) ++j;
    return j;
}

// `\s+(?!\S)|\s+` at position i (i must sit on whitespace). With backtracking
// semantics the lookahead branch matches the run minus its final character
// unless the run extends to the end of the input. Returns the match end.
size_t match_ws_with_lookahead(const Cps& cps, size_t i) {
    const size_t j = whitespace_run_end(cps, i);
    if (j == cps.size()) return j;  // (?!\S) holds at end of input
    if (j - i >= 2) return j - 1;   // backtrack one char so the next is still \s
    return i + 1;                   // single char: second branch
}

// Case fold for the ASCII contraction letters; U+017F (long s) folds to 's'.
uint32_t fold_contraction_letter(uint32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 32;
    if (cp == 0x17F) return 's';
    return cp;
}

// Matches 's|'t|'re|'ve|'m|'ll|'d after an ASCII apostrophe. Returns the
// match length in codepoints (0 if no alternative matches).
size_t match_contraction(const Cps& cps, size_t i, bool ignore_case) {
    if (cps[i].value != '\'' || i + 1 >= cps.size()) return 0;
    const auto letter = [&](size_t k) {
        const uint32_t v = cps[k].value;
        return ignore_case ? fold_contraction_letter(v) : v;
    };
    switch (letter(i + 1)) {
        case 's':
        case 't':
        case 'm':
        case 'd':
            return 2;
        case 'r':
        case 'v':
            return (i + 2 < cps.size() && letter(i + 2) == 'e') ? 3 : 0;
        case 'l':
            return (i + 2 < cps.size() && letter(i + 2) == 'l') ? 3 : 0;
        default:
            return 0;
    }
}

bool is_other(uint32_t cp) {
    return !is_whitespace(cp) && !is_letter(cp) && !is_number(cp);
}

// One GPT-2 alternation step; returns the end of the match starting at i.
size_t match_gpt2(const Cps& cps, size_t i) {
    const size_t n = cps.size();
    if (size_t len = match_contraction(cps, i, /*ignore_case=*/false)) return i + len;

    size_t j = i;
    if (cps[j].value == ' ' && j + 1 < n) ++j;  // the optional leading space
    if (is_letter(cps[j].value)) {
        while (j < n && is_letter(cps[j].value)) ++j;
        return j;
    }
    j = i;
    if (cps[j].value == ' ' && j + 1 < n) ++j;
    if (is_number(cps[j].value)) {
        while (j < n && is_number(cps[j].value)) ++j;
        return j;
    }
    j = i;
    if (cps[j].value == ' ' && j + 1 < n) ++j;
    if (is_other(cps[j].value)) {
        while (j < n && is_other(cps[j].value)) ++j;
        return j;
    }
    if (is_whitespace(cps[i].value)) return match_ws_with_lookahead(cps, i);
    assert(false && "gpt2 alternation is total");
    return i + 1;
}

// One Llama-3 alternation step; returns the end of the match starting at i.
size_t match_llama3(const Cps& cps, size_t i) {
    const size_t n = cps.size();
    const auto is_crlf = [](uint32_t v) { return v == '\r' || v == '\n'; };

    if (size_t len = match_contraction(cps, i, /*ignore_case=*/true)) return i + len;

    // [^\r\n\p{L}\p{N}]?\p{L}+
    const uint32_t c = cps[i].value;
    const bool head_ok = !is_crlf(c) && !is_letter(c) && !is_number(c);
    if (head_ok && i + 1 < n && is_letter(cps[i + 1].value)) {
        size_t j = i + 1;
        while (j < n && is_letter(cps[j].value)) ++j;
        return j;
    }
    if (is_letter(c)) {
        size_t j = i;
        while (j < n && is_letter(cps[j].value)) ++j;
        return j;
    }

    // \p{N}{1,3}
    if (is_number(c)) {
        size_t j = i;
        while (j < n && j < i + 3 && is_number(cps[j].value)) ++j;
        return j;
    }

    //  ?[^\s\p{L}\p{N}]+[\r\n]*
    size_t j = i;
    if (c == ' ' && j + 1 < n) ++j;
    if (j < n && is_other(cps[j].value)) {
        while (j < n && is_other(cps[j].value)) ++j;
        while (j < n && is_crlf(cps[j].value)) ++j;
        return j;
    }

    if (is_whitespace(c)) {
        // \s*[\r\n]+: consumes the run up to and including its last \r or \n.
        const size_t run_end = whitespace_run_end(cps, i);
        for (size_t k = run_end; k > i; --k) {
            if (is_crlf(cps[k - 1].value)) return k;
        }
        return match_ws_with_lookahead(cps, i);
    }
    assert(false && "llama3 alternation is total");
    return i + 1;
}

struct Span {
    size_t begin;
    size_t end;
};

// Non-overlapping leftmost matches of the scheme's pattern, in codepoint indices.
std::vector<Span> find_matches(PreTokenizerKind kind, const Cps& cps) {
    std::vector<Span> matches;
    const size_t n = cps.size();
    switch (kind) {
        case PreTokenizerKind::WS:
            for (size_t i = 0; i < n;) {
                if (!is_whitespace(cps[i].value)) {
                    ++i;
                    continue;
                }
                const size_t j = whitespace_run_end(cps, i);
                matches.push_back({i, j});
                i = j;
            }
            break;
        case PreTokenizerKind::LEADING_WS:
            for (size_t i = 0; i < n;) {
                if (!is_whitespace(cps[i].value)) {
                    ++i;
                    continue;
                }
                const size_t j = match_ws_with_lookahead(cps, i);
                matches.push_back({i, j});
                i = j;
            }
            break;
        case PreTokenizerKind::GPT2:
            for (size_t i = 0; i < n;) {
                const size_t j = match_gpt2(cps, i);
                matches.push_back({i, j});
                i = j;
            }
            break;
        case PreTokenizerKind::LLAMA3:
            for (size_t i = 0; i < n;) {
                const size_t j = match_llama3(cps, i);
                matches.push_back({i, j});
                i = j;
            }
            break;
        case PreTokenizerKind::NO:
            break;
    }
    return matches;
}

}  // namespace

PreTokenizerSpec PreTokenizerSpec::from_name(const std::string& name) {
    for (size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) return PreTokenizerSpec{static_cast<PreTokenizerKind>(i)};
    }
    throw UsageError("unknown pre-tokenizer: " + name +
                     " (expected no, ws, _ws, gpt2 or llama3)");
}

const std::string& PreTokenizerSpec::name() const { return kNames[static_cast<size_t>(kind)]; }

const std::string& PreTokenizerSpec::pattern() const {
    return kPatterns[static_cast<size_t>(kind)];
}

MatchBehavior PreTokenizerSpec::behavior() const {
    switch (kind) {
        case PreTokenizerKind::NO:
            return MatchBehavior::WholeText;
        case PreTokenizerKind::LEADING_WS:
            return MatchBehavior::DelimiterMergedWithNext;
        default:
            return MatchBehavior::IsolatedMatches;
    }
}

std::vector<PreToken> pretokenize(const PreTokenizerSpec& spec, std::string_view text) {
    if (spec.kind == PreTokenizerKind::NO) {
        if (!is_valid_utf8(text)) throw std::invalid_argument("pretokenize: invalid UTF-8 input");
        return {PreToken{text, 0}};
    }
    const Cps cps = decode_utf8(text);
    const std::vector<Span> matches = find_matches(spec.kind, cps);

    const auto byte_at = [&](size_t cp_index) -> size_t {
        return cp_index < cps.size() ? cps[cp_index].byte_offset : text.size();
    };
    const auto slice = [&](size_t cp_begin, size_t cp_end) -> PreToken {
        const size_t b = byte_at(cp_begin);
        const size_t e = byte_at(cp_end);
        return PreToken{text.substr(b, e - b), b};
    };

    std::vector<PreToken> out;
    if (spec.behavior() == MatchBehavior::DelimiterMergedWithNext) {
        size_t pos = 0;
        for (size_t m = 0; m < matches.size(); ++m) {
            if (matches[m].begin > pos) out.push_back(slice(pos, matches[m].begin));
            const size_t next = m + 1 < matches.size() ? matches[m + 1].begin : cps.size();
            out.push_back(slice(matches[m].begin, next));
            pos = next;
        }
        if (pos < cps.size()) out.push_back(slice(pos, cps.size()));
    } else {
        size_t pos = 0;
        for (const Span& m : matches) {
            if (m.begin > pos) out.push_back(slice(pos, m.begin));
            out.push_back(slice(m.begin, m.end));
            pos = m.end;
        }
        if (pos < cps.size()) out.push_back(slice(pos, cps.size()));
    }
    return out;
}

std::vector<std::string> pretokenize_strings(const PreTokenizerSpec& spec, std::string_view text) {
    std::vector<std::string> out;
    for (const PreToken& pt : pretokenize(spec, text)) out.emplace_back(pt.bytes);
    return out;
}

const std::vector<std::string>& pretokenizer_names() {
    static const std::vector<std::string> names(kNames.begin(), kNames.end());
    return names;
}

}  // namespace tokeval
