#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tokeval/errors.hpp"
#include "tokeval/metrics.hpp"

using namespace tokeval;

namespace {

TokenizerModel base_model(const std::string& pretokenizer = "ws") {
    return TokenizerModel(PreTokenizerSpec::from_name(pretokenizer), {});
}

TokenizerModel ab_model() {
    return TokenizerModel(PreTokenizerSpec::from_name("ws"), {MergeRule{'a', 'b'}});
}

TokenDistribution dist_of(const TokenizerModel& model, std::vector<std::string> docs,
                          int threads = 0) {
    return token_distribution(model, corpus_from_documents(std::move(docs)), threads);
}

std::vector<double> random_distribution(std::mt19937& rng, size_t max_types) {
    std::uniform_int_distribution<size_t> n_dist(1, max_types);
    std::uniform_real_distribution<double> mass(0.0, 1.0);
    const size_t n = n_dist(rng);
    std::vector<double> p(n);
    double total = 0.0;
    for (double& v : p) {
        v = mass(rng) + 1e-9;
        total += v;
    }
    for (double& v : p) v /= total;
    return p;
}

}  // namespace

TEST_CASE("token distribution counts encoded ids") {
    const auto dist = dist_of(base_model(), {"hi"});
    CHECK(dist.total == 2);
    CHECK(dist.counts['h'] == 1);
    CHECK(dist.counts['i'] == 1);
    CHECK(dist.observed_types == 2);
    CHECK(dist.vocab_size_reference() == 256);

    const auto merged = dist_of(ab_model(), {"abab"});
    CHECK(merged.total == 2);
    CHECK(merged.counts[256] == 2);
    CHECK(merged.observed_types == 1);

    CHECK(dist_of(base_model(), {}).total == 0);
    CHECK(dist_of(base_model(), {""}).total == 0);
}

TEST_CASE("token distribution is thread independent") {
    std::vector<std::string> docs;
    for (int i = 0; i < 37; ++i) docs.push_back("doc " + std::to_string(i) + " ab abab");
    const auto reference = dist_of(ab_model(), docs, 1);
    for (const int threads : {2, 3, 8}) {
        const auto other = dist_of(ab_model(), docs, threads);
        CHECK(other.counts == reference.counts);
        CHECK(other.total == reference.total);
    }
}

TEST_CASE("corpus token count") {
    CHECK(corpus_token_count(dist_of(ab_model(), {"abab"})) == 2);
    // zero-merge model: one token per byte
    CHECK(corpus_token_count(base_model(), corpus_from_documents({"hello", "x"})) == 6);
    // a merge strictly reduces the count on covered text
    CHECK(corpus_token_count(ab_model(), corpus_from_documents({"hi"})) == 2);
    const auto with = corpus_token_count(ab_model(), corpus_from_documents({"ab"}));
    const auto without = corpus_token_count(base_model(), corpus_from_documents({"ab"}));
    CHECK(with == 1);
    CHECK(without == 2);
}

TEST_CASE("corpus token count is additive over concatenation") {
    const auto model = ab_model();
    const Corpus a = corpus_from_documents({"ab ab", "cd"});
    const Corpus b = corpus_from_documents({"xyz"});
    Corpus both = a;
    both.documents.insert(both.documents.end(), b.documents.begin(), b.documents.end());
    CHECK(corpus_token_count(model, both) ==
          corpus_token_count(model, a) + corpus_token_count(model, b));
}

TEST_CASE("shannon entropy closed forms") {
    CHECK(shannon_entropy(std::vector<double>{1.0}) == 0.0);
    for (const size_t n : {2, 7, 100}) {
        const std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
        CHECK(shannon_entropy(uniform) ==
              doctest::Approx(std::log(static_cast<double>(n))).epsilon(1e-12));
    }
    CHECK(shannon_entropy(std::vector<double>{0.75, 0.25}) ==
          doctest::Approx(0.5623351446188083).epsilon(1e-12));
    // zero entries contribute nothing
    CHECK(shannon_entropy(std::vector<double>{0.75, 0.0, 0.25}) ==
          doctest::Approx(0.5623351446188083).epsilon(1e-12));
}

TEST_CASE("shannon entropy rejects empty distributions") {
    CHECK_THROWS_AS(shannon_entropy(dist_of(base_model(), {})), DataError);
}

TEST_CASE("renyi entropy closed forms") {
    CHECK(renyi_entropy(std::vector<double>{0.5, 0.5}, 2.5) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(renyi_entropy(std::vector<double>{1.0}, 2.5) == 0.0);
    for (const double alpha : {0.25, 0.5, 2.0, 2.5, 10.0}) {
        for (const size_t n : {2, 5, 64}) {
            const std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
            CHECK(renyi_entropy(uniform, alpha) ==
                  doctest::Approx(std::log(static_cast<double>(n))).epsilon(1e-12));
        }
    }
}

TEST_CASE("renyi entropy rejects invalid alpha") {
    const std::vector<double> p{0.5, 0.5};
    CHECK_THROWS_AS(renyi_entropy(p, 1.0), UsageError);
    CHECK_THROWS_AS(renyi_entropy(p, 0.0), UsageError);
    CHECK_THROWS_AS(renyi_entropy(p, -2.5), UsageError);
    CHECK_THROWS_AS(renyi_entropy(dist_of(base_model(), {}), 2.5), DataError);
}

TEST_CASE("renyi entropy is continuous at alpha = 1") {
    std::mt19937 rng(21);
    for (int iter = 0; iter < 300; ++iter) {
        const auto p = random_distribution(rng, 50);
        const double shannon = shannon_entropy(p);
        CHECK(renyi_entropy(p, 1.0 + 1e-6) == doctest::Approx(shannon).epsilon(1e-4));
        CHECK(renyi_entropy(p, 1.0 - 1e-6) == doctest::Approx(shannon).epsilon(1e-4));
    }
}

TEST_CASE("renyi entropy is non-increasing in alpha") {
    std::mt19937 rng(22);
    std::uniform_real_distribution<double> alpha_dist(0.05, 8.0);
    for (int iter = 0; iter < 500; ++iter) {
        const auto p = random_distribution(rng, 30);
        double a1 = alpha_dist(rng);
        double a2 = alpha_dist(rng);
        if (a1 > a2) std::swap(a1, a2);
        if (std::abs(a1 - 1.0) < 1e-9 || std::abs(a2 - 1.0) < 1e-9) continue;
        const double h1 = renyi_entropy(p, a1);
        const double h2 = renyi_entropy(p, a2);
        CHECK(h2 <= h1 + 1e-9);
    }
}

TEST_CASE("renyi efficiency closed forms") {
    // p = (0.5, 0.5) over a 256-token vocab
    TokenDistribution dist;
    dist.counts.assign(256, 0);
    dist.counts['a'] = 5;
    dist.counts['b'] = 5;
    dist.total = 10;
    dist.observed_types = 2;
    CHECK(renyi_efficiency(dist, 2.5, EfficiencyNormalizer::FullVocab) ==
          doctest::Approx(0.125).epsilon(1e-12));
    CHECK(renyi_efficiency(dist, 2.5, EfficiencyNormalizer::ObservedVocab) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("renyi efficiency is 1 exactly for uniform support over the normalizer") {
    TokenDistribution uniform;
    uniform.counts.assign(256, 3);
    uniform.total = 256 * 3;
    uniform.observed_types = 256;
    CHECK(renyi_efficiency(uniform, 2.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vocabulary_coverage(uniform) == doctest::Approx(1.0).epsilon(1e-12));

    // via the encode path: "ab" is uniform over its two observed types
    const auto dist = dist_of(base_model(), {"ab"});
    CHECK(renyi_efficiency(dist, 2.5, EfficiencyNormalizer::ObservedVocab) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("renyi efficiency stays within [0, 1]") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> alpha_dist(0.05, 8.0);
    std::uniform_int_distribution<uint64_t> count_dist(0, 50);
    for (int iter = 0; iter < 500; ++iter) {
        TokenDistribution dist;
        dist.counts.assign(256 + iter % 64, 0);
        for (auto& c : dist.counts) {
            c = count_dist(rng) < 40 ? 0 : count_dist(rng);
            dist.total += c;
            if (c > 0) ++dist.observed_types;
        }
        if (dist.observed_types < 2) continue;
        double alpha = alpha_dist(rng);
        if (std::abs(alpha - 1.0) < 1e-9) continue;
        for (const auto norm :
             {EfficiencyNormalizer::FullVocab, EfficiencyNormalizer::ObservedVocab}) {
            const double eff = renyi_efficiency(dist, alpha, norm);
            CHECK(eff >= 0.0);
            CHECK(eff <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("renyi efficiency requires a normalizer of at least 2") {
    TokenDistribution dist;
    dist.counts.assign(1, 3);  // degenerate single-token vocab reference
    dist.total = 3;
    dist.observed_types = 1;
    CHECK_THROWS_AS(renyi_efficiency(dist, 2.5, EfficiencyNormalizer::FullVocab), DataError);
    CHECK_THROWS_AS(renyi_efficiency(dist, 2.5, EfficiencyNormalizer::ObservedVocab),
                    DataError);
}

TEST_CASE("vocabulary coverage") {
    const auto dist = dist_of(base_model(), {"aab"});
    CHECK(vocabulary_coverage(dist) == doctest::Approx(2.0 / 256.0).epsilon(1e-12));
    CHECK(vocabulary_coverage(dist_of(base_model(), {})) == 0.0);
}

TEST_CASE("metric report bundles every field consistently") {
    const auto model = ab_model();
    const Corpus corpus = corpus_from_documents({"abab xy", "ab"});
    const auto report = compute_metric_report(model, corpus, 2.5);
    const auto dist = token_distribution(model, corpus);

    CHECK(report.corpus_token_count == dist.total);
    CHECK(report.alpha == 2.5);
    CHECK(report.shannon_entropy == doctest::Approx(shannon_entropy(dist)).epsilon(1e-15));
    CHECK(report.renyi_entropy == doctest::Approx(renyi_entropy(dist, 2.5)).epsilon(1e-15));
    CHECK(report.renyi_efficiency_full_vocab ==
          doctest::Approx(renyi_efficiency(dist, 2.5, EfficiencyNormalizer::FullVocab))
              .epsilon(1e-15));
    CHECK(report.renyi_efficiency_observed_vocab ==
          doctest::Approx(renyi_efficiency(dist, 2.5, EfficiencyNormalizer::ObservedVocab))
              .epsilon(1e-15));
    CHECK(report.vocabulary_coverage ==
          doctest::Approx(vocabulary_coverage(dist)).epsilon(1e-15));
    CHECK(report.vocab_size == model.vocab_size());
    CHECK(report.observed_types == dist.observed_types);

    CHECK_THROWS_AS(compute_metric_report(model, corpus_from_documents({}), 2.5), DataError);
    CHECK_THROWS_AS(compute_metric_report(model, corpus, 1.0), UsageError);
}
