#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "test_util.hpp"
#include "tokeval/corpus.hpp"
#include "tokeval/errors.hpp"

using namespace tokeval;

namespace {

struct TempFile {
    std::filesystem::path path;

    explicit TempFile(const std::string& contents) {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("tokeval_corpus_test_" + std::to_string(++counter) + ".txt");
        std::ofstream out(path, std::ios::binary);
        out << contents;
    }
    ~TempFile() { std::filesystem::remove(path); }
};

Corpus load(const std::string& contents, CorpusFormat format = CorpusFormat::PlainLines,
            bool lossy = false) {
    TempFile file(contents);
    LoadOptions opt;
    opt.format = format;
    opt.lossy = lossy;
    return load_corpus(file.path.string(), opt);
}

}  // namespace

TEST_CASE("format names round-trip") {
    CHECK(corpus_format_from_name("plain-lines") == CorpusFormat::PlainLines);
    CHECK(corpus_format_from_name("one-doc-per-record") == CorpusFormat::DocPerRecord);
    CHECK(corpus_format_name(CorpusFormat::PlainLines) == "plain-lines");
    CHECK(corpus_format_name(CorpusFormat::DocPerRecord) == "one-doc-per-record");
    CHECK_THROWS_AS(corpus_format_from_name("jsonl"), UsageError);
}

TEST_CASE("plain-lines splits documents on newlines") {
    CHECK(load("a\nb\n").documents == std::vector<std::string>{"a", "b"});
    CHECK(load("a\nb").documents == std::vector<std::string>{"a", "b"});
    CHECK(load("").documents == std::vector<std::string>{});
    CHECK(load("\n").documents == std::vector<std::string>{""});
    CHECK(load("a\n\nb\n").documents == std::vector<std::string>{"a", "", "b"});
}

TEST_CASE("one-doc-per-record reads length-delimited records") {
    // "a b\nc" (5 bytes) followed by "x" (1 byte)
    const std::string raw = "5\na b\nc\n1\nx\n";
    const Corpus corpus = load(raw, CorpusFormat::DocPerRecord);
    CHECK(corpus.documents == std::vector<std::string>{"a b\nc", "x"});
    CHECK(load("", CorpusFormat::DocPerRecord).documents.empty());
    CHECK(load("0\n\n", CorpusFormat::DocPerRecord).documents ==
          std::vector<std::string>{""});
}

TEST_CASE("malformed record framing fails") {
    CHECK_THROWS_AS(load("5\nab\n", CorpusFormat::DocPerRecord), DataError);
    CHECK_THROWS_AS(load("x\nab\n", CorpusFormat::DocPerRecord), DataError);
    CHECK_THROWS_AS(load("2\nabX", CorpusFormat::DocPerRecord), DataError);
    CHECK_THROWS_AS(load("2\nab", CorpusFormat::DocPerRecord), DataError);
    CHECK_THROWS_AS(load("-1\n\n", CorpusFormat::DocPerRecord), DataError);
}

TEST_CASE("missing file fails") {
    CHECK_THROWS_AS(load_corpus("/nonexistent/tokeval/corpus.txt"), DataError);
}

TEST_CASE("invalid UTF-8 fails unless lossy") {
    const std::string bad = "ok\nb\xffz\n";
    CHECK_THROWS_AS(load(bad), DataError);
    const Corpus corpus = load(bad, CorpusFormat::PlainLines, true);
    REQUIRE(corpus.documents.size() == 2);
    CHECK(corpus.documents[0] == "ok");
    CHECK(corpus.documents[1] == "b\xEF\xBF\xBDz");  // U+FFFD
}

TEST_CASE("word_count counts maximal non-whitespace runs") {
    CHECK(word_count(corpus_from_documents({"a b  c"})) == 3);
    CHECK(word_count(corpus_from_documents({""})) == 0);
    CHECK(word_count(corpus_from_documents({" x ", "y z"})) == 3);
    CHECK(word_count(std::string("a\tb\nc")) == 3);
    // non-ASCII whitespace separates words too
    CHECK(word_count(std::string("a b")) == 2);
    CHECK(word_count(std::string("　")) == 0);
}

TEST_CASE("word_count is additive over document concatenation") {
    std::mt19937 rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        const std::string a = testutil::random_utf8(rng, 30);
        const std::string b = testutil::random_utf8(rng, 30);
        const uint64_t split = word_count(corpus_from_documents({a, b}));
        CHECK(word_count(a) + word_count(b) == split);
        // concatenation with a separating space never loses words
        CHECK(word_count(a + " " + b) == split);
    }
}

TEST_CASE("multi-line record keeps its word count") {
    std::string abstract;
    for (int i = 0; i < 132; ++i) {
        abstract += "w" + std::to_string(i);
        abstract += (i % 10 == 9) ? '\n' : ' ';
    }
    const std::string raw = std::to_string(abstract.size()) + "\n" + abstract + "\n";
    const Corpus corpus = load(raw, CorpusFormat::DocPerRecord);
    REQUIRE(corpus.documents.size() == 1);
    CHECK(word_count(corpus) == 132);
}

TEST_CASE("serialize then reload round-trips") {
    std::mt19937 rng(8);
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<std::string> docs;
        const size_t n = iter % 4;
        for (size_t d = 0; d < n; ++d) {
            std::string doc = testutil::random_utf8(rng, 40);
            if (iter % 2 == 0) {
                // plain-lines cannot hold newlines inside a document
                std::string clean;
                for (char ch : doc)
                    if (ch != '\n' && ch != '\r') clean.push_back(ch);
                doc = clean;
            }
            docs.push_back(doc);
        }
        const CorpusFormat format =
            iter % 2 == 0 ? CorpusFormat::PlainLines : CorpusFormat::DocPerRecord;
        const Corpus corpus = corpus_from_documents(docs);
        const std::string serialized = serialize_corpus(corpus, format);
        const Corpus reloaded = load(serialized, format);
        CHECK(reloaded.documents == corpus.documents);
        // and re-serialization is byte-identical
        CHECK(serialize_corpus(reloaded, format) == serialized);
    }
}

TEST_CASE("save_corpus writes loadable files") {
    const Corpus corpus = corpus_from_documents({"one two", "three"});
    const auto path = std::filesystem::temp_directory_path() / "tokeval_corpus_save.txt";
    save_corpus(corpus, path.string(), CorpusFormat::DocPerRecord);
    LoadOptions opt;
    opt.format = CorpusFormat::DocPerRecord;
    CHECK(load_corpus(path.string(), opt).documents == corpus.documents);
    std::filesystem::remove(path);
}
