#include "tokeval/metrics.hpp"

#include <cmath>

#include "tokeval/errors.hpp"
#include "tokeval/threads.hpp"

namespace tokeval {

namespace {

void require_nonempty(const TokenDistribution& dist) {
    if (dist.total == 0) throw DataError("empty token distribution (corpus produced no tokens)");
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || alpha == 1.0) {
        throw UsageError("Renyi order alpha must be positive and != 1 (alpha = 1 is Shannon)");
    }
}

}  // namespace

std::vector<double> TokenDistribution::probabilities() const {
    std::vector<double> p(counts.size(), 0.0);
    if (total == 0) return p;
    for (size_t i = 0; i < counts.size(); ++i) {
        p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    }
    return p;
}

TokenDistribution token_distribution(const TokenizerModel& model, const Corpus& corpus,
                                     int threads) {
    const int n_threads = resolve_thread_count(threads);
    const size_t n_chunks = chunk_count(corpus.documents.size(), n_threads);
    std::vector<std::vector<uint64_t>> partial(n_chunks,
                                               std::vector<uint64_t>(model.vocab_size(), 0));
    parallel_chunks(corpus.documents.size(), n_threads, [&](size_t chunk, size_t begin, size_t end) {
        Encoder enc(model);
        auto& counts = partial[chunk];
        std::vector<TokenId> ids;
        for (size_t d = begin; d < end; ++d) {
            ids.clear();
            enc.append_encoded(corpus.documents[d], ids);
            for (const TokenId id : ids) counts[id] += 1;
        }
    });
    TokenDistribution dist;
    dist.counts.assign(model.vocab_size(), 0);
    for (const auto& p : partial) {
        for (size_t i = 0; i < p.size(); ++i) dist.counts[i] += p[i];
    }
    for (const uint64_t c : dist.counts) {
        dist.total += c;
        if (c > 0) ++dist.observed_types;
    }
    return dist;
}

uint64_t corpus_token_count(const TokenizerModel& model, const Corpus& corpus, int threads) {
    return token_distribution(model, corpus, threads).total;
}

double shannon_entropy(const std::vector<double>& probs) {
    double h = 0.0;
    for (const double p : probs) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

double shannon_entropy(const TokenDistribution& dist) {
    require_nonempty(dist);
    return shannon_entropy(dist.probabilities());
}

double renyi_entropy(const std::vector<double>& probs, double alpha) {
    check_alpha(alpha);
    double sum = 0.0;
    for (const double p : probs) {
        if (p > 0.0) sum += std::pow(p, alpha);
    }
    if (sum <= 0.0) return 0.0;
    return std::log(sum) / (1.0 - alpha);
}

double renyi_entropy(const TokenDistribution& dist, double alpha) {
    require_nonempty(dist);
    return renyi_entropy(dist.probabilities(), alpha);
}

double renyi_efficiency(const TokenDistribution& dist, double alpha, EfficiencyNormalizer norm) {
    require_nonempty(dist);
    const size_t v = norm == EfficiencyNormalizer::FullVocab ? dist.vocab_size_reference()
                                                             : dist.observed_types;
    if (v < 2) {
        throw DataError("Renyi efficiency normalizer must cover at least 2 types, got " +
                        std::to_string(v));
    }
    return renyi_entropy(dist.probabilities(), alpha) / std::log(static_cast<double>(v));
}

double vocabulary_coverage(const TokenDistribution& dist) {
    if (dist.counts.empty()) return 0.0;
    return static_cast<double>(dist.observed_types) /
           static_cast<double>(dist.vocab_size_reference());
}

MetricReport compute_metric_report(const TokenizerModel& model, const Corpus& corpus,
                                   double alpha, int threads) {
    check_alpha(alpha);
    const TokenDistribution dist = token_distribution(model, corpus, threads);
    require_nonempty(dist);
    MetricReport report;
    report.corpus_token_count = dist.total;
    report.shannon_entropy = shannon_entropy(dist);
    report.renyi_entropy = renyi_entropy(dist, alpha);
    report.alpha = alpha;
    report.renyi_efficiency_full_vocab =
        renyi_efficiency(dist, alpha, EfficiencyNormalizer::FullVocab);
    report.renyi_efficiency_observed_vocab =
        dist.observed_types >= 2
            ? renyi_efficiency(dist, alpha, EfficiencyNormalizer::ObservedVocab)
            : 0.0;
    report.vocabulary_coverage = vocabulary_coverage(dist);
    report.vocab_size = dist.vocab_size_reference();
    report.observed_types = dist.observed_types;
    return report;
}

}  // namespace tokeval
