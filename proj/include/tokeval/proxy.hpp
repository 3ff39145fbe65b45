#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tokeval/bpe.hpp"
#include "tokeval/dataset.hpp"

namespace tokeval {

enum class FeatureKind : uint8_t {
    Unigram,  // token present in the (single) text
    Pair,     // (token from text_a, token from text_b), cartesian mode
    Both,     // token present in both texts, shared_disjoint mode
    Xor,      // token present in exactly one text, shared_disjoint mode
};

struct FeatureKey {
    FeatureKind kind = FeatureKind::Unigram;
    TokenId a = 0;
    TokenId b = 0;  // used by Pair only
    bool operator==(const FeatureKey&) const = default;
};

struct FeatureKeyHash {
    size_t operator()(const FeatureKey& k) const {
        uint64_t h = (static_cast<uint64_t>(k.a) << 33) ^ (static_cast<uint64_t>(k.b) << 2) ^
                     static_cast<uint64_t>(k.kind);
        h ^= h >> 33;
        h *= 0xff51afd7ed558ccdULL;
        h ^= h >> 33;
        return static_cast<size_t>(h);
    }
};

// Dense, deterministic feature indexing: columns are assigned in first-seen
// order over instances (and within an instance, token first-occurrence order).
struct FeatureSpace {
    std::unordered_map<FeatureKey, uint32_t, FeatureKeyHash> index;
    std::vector<FeatureKey> keys;  // column -> key

    size_t size() const { return keys.size(); }
};

// Human-readable feature label, e.g. unigram(_the) or pair(a|b).
std::string feature_name(const FeatureKey& key, const TokenizerModel& model);

// Rows of sorted, unique column indices; values are implicitly 1.
struct SparseBinaryMatrix {
    std::vector<uint32_t> indices;
    std::vector<size_t> row_offsets = {0};

    size_t rows() const { return row_offsets.size() - 1; }
    std::span<const uint32_t> row(size_t i) const {
        return {indices.data() + row_offsets[i], indices.data() + row_offsets[i + 1]};
    }
    void append_row(std::vector<uint32_t> cols);  // sorts and checks uniqueness
};

struct FeaturizeOptions {
    size_t feature_cap = 5'000'000;
    int threads = 0;
};

// Builds the feature space from a training split and featurizes it.
std::pair<FeatureSpace, SparseBinaryMatrix> featurize(const TokenizerModel& model,
                                                      const TaskDataset& ds,
                                                      const FeaturizeOptions& opts = {});

// Featurizes against a frozen space; features unseen in training are dropped.
SparseBinaryMatrix featurize_with(const FeatureSpace& space, const TokenizerModel& model,
                                  const TaskDataset& ds, int threads = 0);

// L1-regularized logistic regression,
//   J(w, b) = C * sum_i log(1 + exp(-y_i (w.x_i + b))) + ||w||_1
// with y in {-1, +1} and an unpenalized intercept. Solved by proximal
// gradient descent with backtracking; deterministic and single-threaded.
struct SolveOptions {
    double C = 0.4;
    double tol = 1e-6;  // relative objective decrease
    int max_iter = 10000;
    std::vector<double>* trajectory = nullptr;  // records J per accepted step
};

struct SolveResult {
    std::vector<double> weights;
    double intercept = 0.0;
    int iterations = 0;
    double objective = 0.0;
    bool converged = false;
};

// Labels may be given as {0, 1} or {-1, +1}; values <= 0 count as negative.
SolveResult train_logreg(const SparseBinaryMatrix& X, const std::vector<int8_t>& y,
                         size_t n_features, const SolveOptions& opts = {});

// Objective and the gradient of its smooth part, shared with tests.
double logreg_objective(const SparseBinaryMatrix& X, const std::vector<int8_t>& y, double C,
                        const std::vector<double>& w, double b);
void logreg_smooth_gradient(const SparseBinaryMatrix& X, const std::vector<int8_t>& y, double C,
                            const std::vector<double>& w, double b, std::vector<double>& grad_w,
                            double& grad_b);

struct ProxyClassifier {
    std::vector<double> weights;
    double intercept = 0.0;
    int iterations = 0;
    double objective = 0.0;
    bool converged = false;
};

// Trained task proxy: a frozen feature space plus one classifier for binary
// tasks or one per label (one-vs-rest) otherwise. For binary tasks the
// positive class is label index 1 (second label in first-seen order).
struct ProxyModel {
    FeatureSpace space;
    std::vector<std::string> label_space;
    TaskKind task_kind = TaskKind::Binary;
    PairMode pair_mode = PairMode::None;
    double C = 0.4;
    std::vector<ProxyClassifier> classifiers;
};

struct ProxyOptions {
    double C = 0.4;
    double tol = 1e-6;
    int max_iter = 10000;
    size_t feature_cap = 5'000'000;
    int threads = 0;
};

ProxyModel train_proxy(const TokenizerModel& model, const TaskDataset& train,
                       const ProxyOptions& opts = {});

enum class F1Average { Macro, Micro };

struct EvalReport {
    std::string metric;  // accuracy, macro_f1 or micro_f1
    double value = 0.0;
    size_t instances = 0;
};

// Featurizes eval against the proxy's space and scores it: accuracy via
// argmax for binary/multiclass (ties go to the lowest label index),
// F1 at score threshold 0 for multilabel.
EvalReport evaluate_proxy(const ProxyModel& proxy, const TokenizerModel& model,
                          const TaskDataset& eval_set, F1Average f1 = F1Average::Macro,
                          int threads = 0);

// Per-label linear scores for each instance (rows x labels), the raw
// material of evaluate_proxy; exposed for inspection and tests.
std::vector<std::vector<double>> proxy_scores(const ProxyModel& proxy,
                                              const TokenizerModel& model,
                                              const TaskDataset& ds, int threads = 0);

}  // namespace tokeval
