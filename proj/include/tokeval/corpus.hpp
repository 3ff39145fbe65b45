#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tokeval {

enum class CorpusFormat {
    PlainLines,    // newline-delimited, one document per line
    DocPerRecord,  // "<decimal byte length>\n<payload bytes>\n" per document
};

CorpusFormat corpus_format_from_name(const std::string& name);
std::string corpus_format_name(CorpusFormat format);

// An ordered collection of UTF-8 documents. Immutable after load; safe to
// share across threads.
struct Corpus {
    std::vector<std::string> documents;
    std::string source_name;
};

struct LoadOptions {
    CorpusFormat format = CorpusFormat::PlainLines;
    // Replace malformed byte sequences with U+FFFD instead of failing.
    bool lossy = false;
};

Corpus load_corpus(const std::string& path, const LoadOptions& options = {});
Corpus corpus_from_documents(std::vector<std::string> documents, std::string source_name = "memory");

void save_corpus(const Corpus& corpus, const std::string& path, CorpusFormat format);
std::string serialize_corpus(const Corpus& corpus, CorpusFormat format);

// Total count of maximal non-whitespace runs across all documents
// (whitespace per the Unicode tables).
uint64_t word_count(const Corpus& corpus);
uint64_t word_count(const std::string& document);

}  // namespace tokeval
