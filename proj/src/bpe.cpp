#include "tokeval/bpe.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "tokeval/errors.hpp"
#include "tokeval/threads.hpp"
#include "tokeval/unicode.hpp"

namespace tokeval {

namespace {

using PairKey = uint64_t;

PairKey pair_key(TokenId l, TokenId r) { return (static_cast<uint64_t>(l) << 32) | r; }
TokenId key_left(PairKey k) { return static_cast<TokenId>(k >> 32); }
TokenId key_right(PairKey k) { return static_cast<TokenId>(k & 0xFFFFFFFFu); }

// Replaces non-overlapping (l, r) occurrences left to right. Returns false
// (leaving out untouched) when the word does not contain the pair.
bool replace_pair(const std::vector<TokenId>& w, TokenId l, TokenId r, TokenId merged,
                  std::vector<TokenId>& out) {
    bool changed = false;
    out.clear();
    for (size_t i = 0; i < w.size();) {
        if (i + 1 < w.size() && w[i] == l && w[i + 1] == r) {
            out.push_back(merged);
            i += 2;
            changed = true;
        } else {
            out.push_back(w[i]);
            ++i;
        }
    }
    return changed;
}

}  // namespace

TokenizerModel::TokenizerModel(PreTokenizerSpec pretokenizer, std::vector<MergeRule> merges)
    : pretokenizer_(pretokenizer), merges_(std::move(merges)) {
    tokens_.reserve(256 + merges_.size());
    for (int b = 0; b < 256; ++b) tokens_.emplace_back(1, static_cast<char>(b));
    for (size_t i = 0; i < merges_.size(); ++i) {
        const TokenId limit = static_cast<TokenId>(256 + i);
        if (merges_[i].left >= limit || merges_[i].right >= limit) {
            throw DataError("merge " + std::to_string(i) + " references token id not yet defined");
        }
        tokens_.push_back(tokens_[merges_[i].left] + tokens_[merges_[i].right]);
    }
}

const std::string& TokenizerModel::token_bytes(TokenId id) const {
    if (id >= tokens_.size()) {
        throw DataError("token id " + std::to_string(id) + " out of range (vocab size " +
                        std::to_string(tokens_.size()) + ")");
    }
    return tokens_[id];
}

std::string TokenizerModel::to_json() const {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["pretokenizer"] = pretokenizer_.name();
    j["achieved_vocab_size"] = vocab_size();
    auto& merges = j["merges"] = nlohmann::ordered_json::array();
    for (const MergeRule& m : merges_) merges.push_back({m.left, m.right});
    return j.dump(2) + "\n";
}

TokenizerModel TokenizerModel::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model is not valid JSON: ") + e.what());
    }
    try {
        if (!j.is_object()) throw DataError("model must be a JSON object");
        if (j.at("version").get<int64_t>() != 1) {
            throw DataError("unsupported model version " + j.at("version").dump());
        }
        PreTokenizerSpec spec = [&] {
            try {
                return PreTokenizerSpec::from_name(j.at("pretokenizer").get<std::string>());
            } catch (const UsageError& e) {
                throw DataError(e.what());
            }
        }();
        std::vector<MergeRule> merges;
        for (const auto& m : j.at("merges")) {
            if (!m.is_array() || m.size() != 2 || !m[0].is_number_unsigned() ||
                !m[1].is_number_unsigned()) {
                throw DataError("each merge must be a pair of unsigned token ids");
            }
            merges.push_back({m[0].get<TokenId>(), m[1].get<TokenId>()});
        }
        const auto achieved = j.at("achieved_vocab_size").get<uint64_t>();
        if (achieved != 256 + merges.size()) {
            throw DataError("achieved_vocab_size " + std::to_string(achieved) +
                            " does not match 256 + " + std::to_string(merges.size()) + " merges");
        }
        return TokenizerModel(spec, std::move(merges));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed model JSON: ") + e.what());
    }
}

void TokenizerModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << to_json();
    if (!out) throw DataError("failed writing " + path);
}

TokenizerModel TokenizerModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

std::vector<WordEntry> build_word_table(const PreTokenizerSpec& spec, const Corpus& corpus,
                                        int threads) {
    const int n_threads = resolve_thread_count(threads);
    const size_t n_chunks = chunk_count(corpus.documents.size(), n_threads);
    std::vector<std::unordered_map<std::string, uint64_t>> partial(n_chunks);
    parallel_chunks(corpus.documents.size(), n_threads, [&](size_t chunk, size_t begin, size_t end) {
        auto& counts = partial[chunk];
        for (size_t d = begin; d < end; ++d) {
            for (const PreToken& pt : pretokenize(spec, corpus.documents[d])) {
                counts[std::string(pt.bytes)] += 1;
            }
        }
    });
    std::unordered_map<std::string, uint64_t> total;
    for (auto& p : partial) {
        for (auto& [word, count] : p) total[word] += count;
    }
    std::vector<WordEntry> table;
    table.reserve(total.size());
    for (auto& [word, count] : total) table.push_back({word, count});
    std::sort(table.begin(), table.end(),
              [](const WordEntry& a, const WordEntry& b) { return a.word < b.word; });
    return table;
}

TokenizerModel train_bpe(const Corpus& corpus, const TrainConfig& config) {
    if (corpus.documents.empty()) throw DataError("cannot train on an empty corpus");
    return train_bpe(build_word_table(config.pretokenizer, corpus, config.threads), config);
}

TokenizerModel train_bpe(std::vector<WordEntry> entries, const TrainConfig& config) {
    if (config.vocab_size < 256) {
        throw UsageError("vocab size must be at least 256 (the byte alphabet)");
    }
    if (entries.empty()) throw DataError("cannot train on an empty corpus");

    std::vector<std::string> tokens;
    tokens.reserve(config.vocab_size);
    for (int b = 0; b < 256; ++b) tokens.emplace_back(1, static_cast<char>(b));

    std::vector<std::vector<TokenId>> words(entries.size());
    std::vector<uint64_t> freq(entries.size());
    for (size_t i = 0; i < entries.size(); ++i) {
        words[i].reserve(entries[i].word.size());
        for (unsigned char b : entries[i].word) words[i].push_back(b);
        freq[i] = entries[i].count;
    }

    std::unordered_map<PairKey, uint64_t> counts;
    // Word indices that have contained the pair at some point; stale entries
    // are filtered when the pair is merged.
    std::unordered_map<PairKey, std::vector<uint32_t>> where;
    for (size_t i = 0; i < words.size(); ++i) {
        const auto& w = words[i];
        for (size_t p = 0; p + 1 < w.size(); ++p) {
            const PairKey k = pair_key(w[p], w[p + 1]);
            counts[k] += freq[i];
            auto& wh = where[k];
            if (wh.empty() || wh.back() != i) wh.push_back(static_cast<uint32_t>(i));
        }
    }

    struct Entry {
        uint64_t count;
        TokenId left;
        TokenId right;
    };
    // Pop order: highest count, then lexicographically smallest left token
    // bytes, then right token bytes. Ids break the rare exact-bytes tie so
    // the order is total.
    const auto worse = [&tokens](const Entry& a, const Entry& b) {
        if (a.count != b.count) return a.count < b.count;
        if (tokens[a.left] != tokens[b.left]) return tokens[a.left] > tokens[b.left];
        if (tokens[a.right] != tokens[b.right]) return tokens[a.right] > tokens[b.right];
        if (a.left != b.left) return a.left > b.left;
        return a.right > b.right;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
    for (const auto& [k, c] : counts) {
        if (c >= 2) heap.push({c, key_left(k), key_right(k)});
    }

    std::vector<MergeRule> merges;
    std::vector<TokenId> scratch;
    std::unordered_map<PairKey, int64_t> delta;
    while (256 + merges.size() < config.vocab_size) {
        Entry best{};
        bool found = false;
        while (!heap.empty()) {
            const Entry top = heap.top();
            const auto it = counts.find(pair_key(top.left, top.right));
            if (it == counts.end() || it->second != top.count || it->second < 2) {
                heap.pop();  // stale or no longer eligible
                continue;
            }
            best = top;
            found = true;
            break;
        }
        if (!found) break;  // pairs occurring once are never merged
        heap.pop();

        const TokenId merged = static_cast<TokenId>(256 + merges.size());
        const PairKey best_key = pair_key(best.left, best.right);
        merges.push_back({best.left, best.right});
        tokens.push_back(tokens[best.left] + tokens[best.right]);

        auto wit = where.find(best_key);
        std::vector<uint32_t> touched = std::move(wit->second);
        where.erase(wit);
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

        delta.clear();
        for (const uint32_t wi : touched) {
            auto& w = words[wi];
            if (!replace_pair(w, best.left, best.right, merged, scratch)) continue;
            const int64_t c = static_cast<int64_t>(freq[wi]);
            for (size_t p = 0; p + 1 < w.size(); ++p) {
                const PairKey k = pair_key(w[p], w[p + 1]);
                counts[k] -= freq[wi];
                delta[k] -= c;
            }
            w.swap(scratch);
            for (size_t p = 0; p + 1 < w.size(); ++p) {
                const PairKey k = pair_key(w[p], w[p + 1]);
                counts[k] += freq[wi];
                delta[k] += c;
                auto& wh = where[k];
                if (wh.empty() || wh.back() != wi) wh.push_back(wi);
            }
        }
        for (const auto& [k, d] : delta) {
            auto it = counts.find(k);
            if (it != counts.end() && it->second == 0) {
                counts.erase(it);
                continue;
            }
            if (d != 0 && k != best_key && it != counts.end() && it->second >= 2) {
                heap.push({it->second, key_left(k), key_right(k)});
            }
        }
        counts.erase(best_key);
    }

    return TokenizerModel(config.pretokenizer, std::move(merges));
}

Encoder::Encoder(const TokenizerModel& model) : model_(model) {
    const auto& merges = model.merges();
    pair_rank_.reserve(merges.size());
    for (uint32_t i = 0; i < merges.size(); ++i) {
        pair_rank_.emplace(pair_key(merges[i].left, merges[i].right), i);
    }
}

const std::vector<TokenId>& Encoder::encode_word(std::string_view word) {
    if (auto it = cache_.find(word); it != cache_.end()) return it->second;

    std::vector<TokenId> ids;
    ids.reserve(word.size());
    for (unsigned char b : word) ids.push_back(b);

    if (ids.size() >= 2 && !pair_rank_.empty()) {
        // Linked-list merge: always apply the lowest-rank pair present, and
        // among equal ranks the leftmost occurrence. Equivalent to replaying
        // the merge list in rank order.
        const size_t n = ids.size();
        std::vector<uint32_t> next(n), prev(n);
        std::vector<char> alive(n, 1);
        for (size_t i = 0; i < n; ++i) {
            next[i] = static_cast<uint32_t>(i + 1);
            prev[i] = static_cast<uint32_t>(i == 0 ? n : i - 1);
        }
        const auto rank_at = [&](uint32_t pos) -> uint32_t {
            const uint32_t nx = next[pos];
            if (nx >= n) return UINT32_MAX;
            const auto it = pair_rank_.find(pair_key(ids[pos], ids[nx]));
            return it == pair_rank_.end() ? UINT32_MAX : it->second;
        };

        struct Item {
            uint32_t rank;
            uint32_t pos;
        };
        const auto later = [](const Item& a, const Item& b) {
            return a.rank != b.rank ? a.rank > b.rank : a.pos > b.pos;
        };
        std::priority_queue<Item, std::vector<Item>, decltype(later)> heap(later);
        for (uint32_t i = 0; i + 1 < n; ++i) {
            if (const uint32_t r = rank_at(i); r != UINT32_MAX) heap.push({r, i});
        }
        while (!heap.empty()) {
            const Item item = heap.top();
            heap.pop();
            if (!alive[item.pos] || rank_at(item.pos) != item.rank) continue;
            const uint32_t right = next[item.pos];
            ids[item.pos] = 256 + item.rank;
            alive[right] = 0;
            next[item.pos] = next[right];
            if (next[right] < n) prev[next[right]] = item.pos;
            if (prev[item.pos] < n) {
                if (const uint32_t r = rank_at(prev[item.pos]); r != UINT32_MAX) {
                    heap.push({r, prev[item.pos]});
                }
            }
            if (const uint32_t r = rank_at(item.pos); r != UINT32_MAX) {
                heap.push({r, item.pos});
            }
        }
        std::vector<TokenId> merged;
        for (uint32_t i = 0; i < n; i = next[i]) merged.push_back(ids[i]);
        ids = std::move(merged);
    }

    return cache_.emplace(std::string(word), std::move(ids)).first->second;
}

void Encoder::append_encoded(std::string_view text, std::vector<TokenId>& out) {
    for (const PreToken& pt : pretokenize(model_.pretokenizer(), text)) {
        const auto& ids = encode_word(pt.bytes);
        out.insert(out.end(), ids.begin(), ids.end());
    }
}

std::vector<TokenId> Encoder::encode(std::string_view text) {
    std::vector<TokenId> out;
    append_encoded(text, out);
    return out;
}

std::vector<TokenId> encode(const TokenizerModel& model, std::string_view text) {
    Encoder enc(model);
    return enc.encode(text);
}

std::string decode(const TokenizerModel& model, const std::vector<TokenId>& ids) {
    std::string out;
    for (const TokenId id : ids) out += model.token_bytes(id);
    return out;
}

std::string render_token(std::string_view bytes) {
    std::string out;
    size_t pos = 0;
    while (pos < bytes.size()) {
        Codepoint cp{};
        if (try_decode_one(bytes, pos, cp)) {
            if (is_whitespace(cp.value)) {
                out.push_back('_');
            } else {
                out.append(bytes.substr(pos, cp.byte_length));
            }
            pos += cp.byte_length;
        } else {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\x%02X", static_cast<unsigned char>(bytes[pos]));
            out += buf;
            ++pos;
        }
    }
    return out;
}

}  // namespace tokeval
