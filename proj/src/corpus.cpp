#include "tokeval/corpus.hpp"

#include <fstream>
#include <sstream>

#include "tokeval/errors.hpp"
#include "tokeval/unicode.hpp"

namespace tokeval {

CorpusFormat corpus_format_from_name(const std::string& name) {
    if (name == "plain-lines") return CorpusFormat::PlainLines;
    if (name == "one-doc-per-record") return CorpusFormat::DocPerRecord;
    throw UsageError("unknown corpus format: " + name);
}

std::string corpus_format_name(CorpusFormat format) {
    return format == CorpusFormat::PlainLines ? "plain-lines" : "one-doc-per-record";
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw DataError("read failure: " + path);
    return buf.str();
}

std::vector<std::string> split_lines(const std::string& data) {
    std::vector<std::string> docs;
    size_t pos = 0;
    while (pos < data.size()) {
        size_t nl = data.find('\n', pos);
        if (nl == std::string::npos) {
            docs.push_back(data.substr(pos));
            break;
        }
        docs.push_back(data.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return docs;
}

std::vector<std::string> split_records(const std::string& data, const std::string& path) {
    std::vector<std::string> docs;
    size_t pos = 0;
    while (pos < data.size()) {
        size_t nl = data.find('\n', pos);
        if (nl == std::string::npos) {
            throw DataError("malformed record header (missing newline) in " + path);
        }
        const std::string header = data.substr(pos, nl - pos);
        if (header.empty() || header.find_first_not_of("0123456789") != std::string::npos) {
            throw DataError("malformed record length '" + header + "' in " + path);
        }
        uint64_t length = 0;
        try {
            length = std::stoull(header);
        } catch (const std::exception&) {
            throw DataError("malformed record length '" + header + "' in " + path);
        }
        pos = nl + 1;
        if (pos + length + 1 > data.size()) {
            throw DataError("truncated record payload in " + path);
        }
        docs.push_back(data.substr(pos, length));
        pos += length;
        if (data[pos] != '\n') {
            throw DataError("record payload not terminated by newline in " + path);
        }
        ++pos;
    }
    return docs;
}

void check_or_fix_utf8(std::vector<std::string>& docs, bool lossy, const std::string& path) {
    for (size_t i = 0; i < docs.size(); ++i) {
        if (is_valid_utf8(docs[i])) continue;
        if (!lossy) {
            throw DataError("document " + std::to_string(i) + " in " + path +
                            " is not valid UTF-8 (use the lossy flag to replace bad bytes)");
        }
        docs[i] = sanitize_utf8(docs[i]);
    }
}

}  // namespace

Corpus load_corpus(const std::string& path, const LoadOptions& options) {
    const std::string data = read_file(path);
    std::vector<std::string> docs = options.format == CorpusFormat::PlainLines
                                        ? split_lines(data)
                                        : split_records(data, path);
    check_or_fix_utf8(docs, options.lossy, path);
    return Corpus{std::move(docs), path};
}

Corpus corpus_from_documents(std::vector<std::string> documents, std::string source_name) {
    for (size_t i = 0; i < documents.size(); ++i) {
        if (!is_valid_utf8(documents[i])) {
            throw DataError("document " + std::to_string(i) + " is not valid UTF-8");
        }
    }
    return Corpus{std::move(documents), std::move(source_name)};
}

std::string serialize_corpus(const Corpus& corpus, CorpusFormat format) {
    std::string out;
    for (const std::string& doc : corpus.documents) {
        if (format == CorpusFormat::PlainLines) {
            if (doc.find('\n') != std::string::npos) {
                throw DataError("document contains a newline; use one-doc-per-record");
            }
            out += doc;
            out += '\n';
        } else {
            out += std::to_string(doc.size());
            out += '\n';
            out += doc;
            out += '\n';
        }
    }
    return out;
}

void save_corpus(const Corpus& corpus, const std::string& path, CorpusFormat format) {
    const std::string data = serialize_corpus(corpus, format);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open file for writing: " + path);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw DataError("write failure: " + path);
}

uint64_t word_count(const std::string& document) {
    uint64_t words = 0;
    bool in_word = false;
    for (const Codepoint& cp : decode_utf8(document)) {
        if (is_whitespace(cp.value)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++words;
        }
    }
    return words;
}

uint64_t word_count(const Corpus& corpus) {
    uint64_t total = 0;
    for (const std::string& doc : corpus.documents) total += word_count(doc);
    return total;
}

}  // namespace tokeval
