#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tokeval/corpus.hpp"
#include "tokeval/pretokenize.hpp"

namespace tokeval {

using TokenId = uint32_t;

// Merge with rank i produces token id 256 + i whose bytes are the
// concatenation of its operands' bytes.
struct MergeRule {
    TokenId left;
    TokenId right;
    bool operator==(const MergeRule&) const = default;
};

class TokenizerModel {
  public:
    TokenizerModel(PreTokenizerSpec pretokenizer, std::vector<MergeRule> merges);

    const PreTokenizerSpec& pretokenizer() const { return pretokenizer_; }
    const std::vector<MergeRule>& merges() const { return merges_; }

    // 256 byte tokens plus one per merge. Training stops early when no pair
    // occurs at least twice, so this can fall short of the requested size.
    size_t vocab_size() const { return 256 + merges_.size(); }

    const std::string& token_bytes(TokenId id) const;

    std::string to_json() const;
    static TokenizerModel from_json(const std::string& text);

    void save(const std::string& path) const;
    static TokenizerModel load(const std::string& path);

  private:
    PreTokenizerSpec pretokenizer_;
    std::vector<MergeRule> merges_;
    std::vector<std::string> tokens_;  // id -> bytes
};

struct TrainConfig {
    size_t vocab_size = 32000;
    PreTokenizerSpec pretokenizer = PreTokenizerSpec{PreTokenizerKind::GPT2};
    int threads = 0;  // 0: resolve via TOKEVAL_THREADS / hardware
};

// Pre-token type with its corpus frequency; the trainer's working unit.
struct WordEntry {
    std::string word;
    uint64_t count;
    bool operator==(const WordEntry&) const = default;
};

// Distinct pre-tokens of the corpus with frequencies, sorted by word bytes.
// Sorting makes the table (and everything derived from it) independent of
// document order inside a chunk merge and of the thread count.
std::vector<WordEntry> build_word_table(const PreTokenizerSpec& spec, const Corpus& corpus,
                                        int threads = 0);

TokenizerModel train_bpe(const Corpus& corpus, const TrainConfig& config);
TokenizerModel train_bpe(std::vector<WordEntry> words, const TrainConfig& config);

// Encoder with a per-instance pre-token cache. Distinct pre-tokens repeat
// heavily in natural text, so corpus-scale encoding hits the cache far more
// often than the merge loop.
class Encoder {
  public:
    explicit Encoder(const TokenizerModel& model);

    std::vector<TokenId> encode(std::string_view text);
    void append_encoded(std::string_view text, std::vector<TokenId>& out);

    const TokenizerModel& model() const { return model_; }

  private:
    struct StringViewHash {
        using is_transparent = void;
        size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
    };

    const std::vector<TokenId>& encode_word(std::string_view word);

    const TokenizerModel& model_;
    std::unordered_map<uint64_t, uint32_t> pair_rank_;
    std::unordered_map<std::string, std::vector<TokenId>, StringViewHash, std::equal_to<>> cache_;
};

std::vector<TokenId> encode(const TokenizerModel& model, std::string_view text);
std::string decode(const TokenizerModel& model, const std::vector<TokenId>& ids);

// Display form: whitespace codepoints become '_', bytes that are not valid
// UTF-8 on their own (mid-character splits) become \xNN escapes.
std::string render_token(std::string_view bytes);

}  // namespace tokeval
