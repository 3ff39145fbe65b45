#pragma once

#include <cstdint>
#include <vector>

#include "tokeval/bpe.hpp"
#include "tokeval/corpus.hpp"

namespace tokeval {

// Token frequencies of a corpus under a tokenizer. Probabilities are
// count / total over the observed tokens.
struct TokenDistribution {
    std::vector<uint64_t> counts;  // indexed by token id, size = vocab size
    uint64_t total = 0;            // corpus token count
    size_t observed_types = 0;     // ids with nonzero count

    size_t vocab_size_reference() const { return counts.size(); }
    std::vector<double> probabilities() const;
};

TokenDistribution token_distribution(const TokenizerModel& model, const Corpus& corpus,
                                     int threads = 0);

inline uint64_t corpus_token_count(const TokenDistribution& dist) { return dist.total; }
uint64_t corpus_token_count(const TokenizerModel& model, const Corpus& corpus, int threads = 0);

// Entropies are in nats; zero-probability entries contribute nothing.
// The raw-probability overloads are the math; the distribution overloads
// add the emptiness checks.
double shannon_entropy(const std::vector<double>& probs);
double shannon_entropy(const TokenDistribution& dist);

// Rényi entropy of order alpha (alpha > 0, alpha != 1; Shannon entropy is
// the alpha = 1 limit and has its own function).
double renyi_entropy(const std::vector<double>& probs, double alpha);
double renyi_entropy(const TokenDistribution& dist, double alpha);

enum class EfficiencyNormalizer {
    FullVocab,      // ln of the full vocabulary size (default)
    ObservedVocab,  // ln of the distinct token count actually seen
};

// Rényi efficiency: H_alpha(p) / ln(V). The normalizer must be >= 2.
double renyi_efficiency(const TokenDistribution& dist, double alpha,
                        EfficiencyNormalizer norm = EfficiencyNormalizer::FullVocab);

// Fraction of the vocabulary observed at least once.
double vocabulary_coverage(const TokenDistribution& dist);

// Flat bundle of every intrinsic measure, as emitted by reports.
struct MetricReport {
    uint64_t corpus_token_count = 0;
    double shannon_entropy = 0.0;
    double renyi_entropy = 0.0;
    double alpha = 2.5;
    double renyi_efficiency_full_vocab = 0.0;
    double renyi_efficiency_observed_vocab = 0.0;
    double vocabulary_coverage = 0.0;
    uint64_t vocab_size = 0;
    uint64_t observed_types = 0;
};

MetricReport compute_metric_report(const TokenizerModel& model, const Corpus& corpus,
                                   double alpha, int threads = 0);

}  // namespace tokeval
