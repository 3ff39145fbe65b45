#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tokeval {

// The five segmentation rules. WS, GPT2 and LLAMA3 emit every pattern match
// as its own pre-token; LEADING_WS treats whitespace matches as delimiters
// merged with the following segment; NO returns the whole text.
enum class PreTokenizerKind {
    NO,
    WS,
    LEADING_WS,
    GPT2,
    LLAMA3,
};

enum class MatchBehavior {
    WholeText,
    IsolatedMatches,
    DelimiterMergedWithNext,
};

struct PreTokenizerSpec {
    PreTokenizerKind kind = PreTokenizerKind::GPT2;

    static PreTokenizerSpec from_name(const std::string& name);
    const std::string& name() const;
    // The defining regular expression (empty for NO). Informational: the
    // segmenter itself is a hand-rolled scanner with identical semantics,
    // checked against reference engines in the test suite.
    const std::string& pattern() const;
    MatchBehavior behavior() const;
};

struct PreToken {
    std::string_view bytes;  // view into the input text
    size_t start_offset = 0;
};

// Segments `text` into pre-tokens that tile it exactly (no gaps, no
// overlaps). Throws std::invalid_argument on malformed UTF-8.
std::vector<PreToken> pretokenize(const PreTokenizerSpec& spec, std::string_view text);

std::vector<std::string> pretokenize_strings(const PreTokenizerSpec& spec, std::string_view text);

const std::vector<std::string>& pretokenizer_names();

}  // namespace tokeval
