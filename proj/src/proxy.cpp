#include "tokeval/proxy.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <unordered_set>

#include "tokeval/errors.hpp"
#include "tokeval/threads.hpp"

namespace tokeval {

namespace {

// log(1 + exp(-t)) without overflow for large |t|.
double log1p_exp_neg(double t) {
    return t > 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
}

// sigmoid(-t) = 1 / (1 + exp(t)), stable on both sides.
double sigmoid_neg(double t) {
    if (t >= 0.0) {
        const double e = std::exp(-t);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(t));
}

double smooth_loss(const SparseBinaryMatrix& X, const std::vector<double>& ys, double C,
                   const std::vector<double>& w, double b) {
    double loss = 0.0;
    for (size_t i = 0; i < X.rows(); ++i) {
        double z = b;
        for (const uint32_t j : X.row(i)) z += w[j];
        loss += log1p_exp_neg(ys[i] * z);
    }
    return C * loss;
}

std::vector<double> signed_labels(const std::vector<int8_t>& y) {
    std::vector<double> ys(y.size());
    for (size_t i = 0; i < y.size(); ++i) ys[i] = y[i] > 0 ? 1.0 : -1.0;
    return ys;
}

std::vector<TokenId> distinct_first_seen(const std::vector<TokenId>& ids) {
    std::vector<TokenId> out;
    std::unordered_set<TokenId> seen;
    for (const TokenId t : ids) {
        if (seen.insert(t).second) out.push_back(t);
    }
    return out;
}

void instance_features(PairMode mode, const std::vector<TokenId>& a_ids,
                       const std::vector<TokenId>& b_ids, std::vector<FeatureKey>& out) {
    out.clear();
    const std::vector<TokenId> da = distinct_first_seen(a_ids);
    if (mode == PairMode::None) {
        for (const TokenId t : da) out.push_back({FeatureKind::Unigram, t, 0});
        return;
    }
    const std::vector<TokenId> db = distinct_first_seen(b_ids);
    if (mode == PairMode::Cartesian) {
        out.reserve(da.size() * db.size());
        for (const TokenId x : da) {
            for (const TokenId y : db) out.push_back({FeatureKind::Pair, x, y});
        }
        return;
    }
    const std::unordered_set<TokenId> sa(da.begin(), da.end());
    const std::unordered_set<TokenId> sb(db.begin(), db.end());
    for (const TokenId t : da) {
        out.push_back({sb.count(t) ? FeatureKind::Both : FeatureKind::Xor, t, 0});
    }
    for (const TokenId t : db) {
        if (!sa.count(t)) out.push_back({FeatureKind::Xor, t, 0});
    }
}

void check_pair_texts(const TaskDataset& ds) {
    for (size_t i = 0; i < ds.instances.size(); ++i) {
        const bool has_b = !ds.instances[i].text_b.empty();
        if (ds.pair_mode != PairMode::None && !has_b) {
            throw DataError("pair mode `" + pair_mode_name(ds.pair_mode) + "` set but instance " +
                            std::to_string(i) + " has no text_b");
        }
        if (ds.pair_mode == PairMode::None && has_b) {
            throw DataError("instance " + std::to_string(i) +
                            " has text_b but pair mode is none");
        }
    }
}

// Encoded texts for every instance, computed in parallel. tok_b stays empty
// in single-text mode.
struct EncodedInstances {
    std::vector<std::vector<TokenId>> tok_a;
    std::vector<std::vector<TokenId>> tok_b;
};

EncodedInstances encode_instances(const TokenizerModel& model, const TaskDataset& ds,
                                  int threads) {
    EncodedInstances enc;
    enc.tok_a.resize(ds.instances.size());
    enc.tok_b.resize(ds.instances.size());
    parallel_chunks(ds.instances.size(), resolve_thread_count(threads),
                    [&](size_t, size_t begin, size_t end) {
                        Encoder encoder(model);
                        for (size_t i = begin; i < end; ++i) {
                            enc.tok_a[i] = encoder.encode(ds.instances[i].text_a);
                            if (ds.pair_mode != PairMode::None) {
                                enc.tok_b[i] = encoder.encode(ds.instances[i].text_b);
                            }
                        }
                    });
    return enc;
}

}  // namespace

void SparseBinaryMatrix::append_row(std::vector<uint32_t> cols) {
    std::sort(cols.begin(), cols.end());
    if (std::adjacent_find(cols.begin(), cols.end()) != cols.end()) {
        throw DataError("duplicate feature column within a row");
    }
    indices.insert(indices.end(), cols.begin(), cols.end());
    row_offsets.push_back(indices.size());
}

std::string feature_name(const FeatureKey& key, const TokenizerModel& model) {
    switch (key.kind) {
        case FeatureKind::Unigram: return "unigram(" + render_token(model.token_bytes(key.a)) + ")";
        case FeatureKind::Pair:
            return "pair(" + render_token(model.token_bytes(key.a)) + "|" +
                   render_token(model.token_bytes(key.b)) + ")";
        case FeatureKind::Both: return "both(" + render_token(model.token_bytes(key.a)) + ")";
        case FeatureKind::Xor: return "xor(" + render_token(model.token_bytes(key.a)) + ")";
    }
    return "?";
}

std::pair<FeatureSpace, SparseBinaryMatrix> featurize(const TokenizerModel& model,
                                                      const TaskDataset& ds,
                                                      const FeaturizeOptions& opts) {
    check_pair_texts(ds);
    const EncodedInstances enc = encode_instances(model, ds, opts.threads);

    FeatureSpace space;
    SparseBinaryMatrix X;
    std::vector<FeatureKey> keys;
    std::vector<uint32_t> cols;
    for (size_t i = 0; i < ds.instances.size(); ++i) {
        instance_features(ds.pair_mode, enc.tok_a[i], enc.tok_b[i], keys);
        cols.clear();
        for (const FeatureKey& key : keys) {
            auto [it, inserted] = space.index.emplace(key, static_cast<uint32_t>(space.keys.size()));
            if (inserted) {
                space.keys.push_back(key);
                if (space.keys.size() > opts.feature_cap) {
                    throw DataError("feature space exceeds the cap of " +
                                    std::to_string(opts.feature_cap) +
                                    " features; use --pair-mode shared_disjoint or raise "
                                    "--feature-cap");
                }
            }
            cols.push_back(it->second);
        }
        X.append_row(std::move(cols));
        cols = {};
    }
    return {std::move(space), std::move(X)};
}

SparseBinaryMatrix featurize_with(const FeatureSpace& space, const TokenizerModel& model,
                                  const TaskDataset& ds, int threads) {
    check_pair_texts(ds);
    const EncodedInstances enc = encode_instances(model, ds, threads);

    std::vector<std::vector<uint32_t>> rows(ds.instances.size());
    parallel_chunks(ds.instances.size(), resolve_thread_count(threads),
                    [&](size_t, size_t begin, size_t end) {
                        std::vector<FeatureKey> keys;
                        for (size_t i = begin; i < end; ++i) {
                            instance_features(ds.pair_mode, enc.tok_a[i], enc.tok_b[i], keys);
                            for (const FeatureKey& key : keys) {
                                const auto it = space.index.find(key);
                                if (it != space.index.end()) rows[i].push_back(it->second);
                            }
                        }
                    });
    SparseBinaryMatrix X;
    for (auto& r : rows) X.append_row(std::move(r));
    return X;
}

double logreg_objective(const SparseBinaryMatrix& X, const std::vector<int8_t>& y, double C,
                        const std::vector<double>& w, double b) {
    const std::vector<double> ys = signed_labels(y);
    double l1 = 0.0;
    for (const double v : w) l1 += std::fabs(v);
    return smooth_loss(X, ys, C, w, b) + l1;
}

void logreg_smooth_gradient(const SparseBinaryMatrix& X, const std::vector<int8_t>& y, double C,
                            const std::vector<double>& w, double b, std::vector<double>& grad_w,
                            double& grad_b) {
    const std::vector<double> ys = signed_labels(y);
    grad_w.assign(w.size(), 0.0);
    grad_b = 0.0;
    for (size_t i = 0; i < X.rows(); ++i) {
        double z = b;
        for (const uint32_t j : X.row(i)) z += w[j];
        const double r = -C * ys[i] * sigmoid_neg(ys[i] * z);
        for (const uint32_t j : X.row(i)) grad_w[j] += r;
        grad_b += r;
    }
}

SolveResult train_logreg(const SparseBinaryMatrix& X, const std::vector<int8_t>& y,
                         size_t n_features, const SolveOptions& opts) {
    const size_t n = X.rows();
    if (n == 0) throw DataError("cannot fit a classifier on an empty matrix");
    if (y.size() != n) {
        throw DataError("label count " + std::to_string(y.size()) + " != row count " +
                        std::to_string(n));
    }
    for (const uint32_t j : X.indices) {
        if (j >= n_features) throw DataError("feature index out of range");
    }
    size_t positives = 0;
    for (const int8_t v : y) positives += v > 0;
    if (positives == 0 || positives == n) {
        throw DataError("labels contain a single class");
    }
    if (!(opts.C > 0.0)) throw UsageError("C must be positive");
    if (!(opts.tol >= 0.0)) throw UsageError("tol must be non-negative");

    const std::vector<double> ys = signed_labels(y);

    SolveResult res;
    res.weights.assign(n_features, 0.0);
    double& b = res.intercept;

    std::vector<double> grad_w(n_features, 0.0);
    std::vector<double> w_new(n_features, 0.0);
    double grad_b = 0.0;

    double loss_cur = smooth_loss(X, ys, opts.C, res.weights, b);
    double obj_prev = loss_cur;  // w = 0 so the L1 term is 0
    if (opts.trajectory) opts.trajectory->push_back(obj_prev);

    double eta = 1.0;
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        logreg_smooth_gradient(X, y, opts.C, res.weights, b, grad_w, grad_b);

        double loss_new = 0.0;
        double b_new = b;
        while (true) {
            for (size_t j = 0; j < n_features; ++j) {
                const double v = res.weights[j] - eta * grad_w[j];
                if (v > eta) {
                    w_new[j] = v - eta;
                } else if (v < -eta) {
                    w_new[j] = v + eta;
                } else {
                    w_new[j] = 0.0;
                }
            }
            b_new = b - eta * grad_b;
            loss_new = smooth_loss(X, ys, opts.C, w_new, b_new);

            double lin = 0.0;
            double sq = 0.0;
            for (size_t j = 0; j < n_features; ++j) {
                const double d = w_new[j] - res.weights[j];
                lin += grad_w[j] * d;
                sq += d * d;
            }
            const double db = b_new - b;
            lin += grad_b * db;
            sq += db * db;
            // Accept within floating-point noise of the two loss values; an
            // absolute slack would swamp the comparison when C is tiny.
            const double fp_slack = 16.0 * std::numeric_limits<double>::epsilon() *
                                    (std::fabs(loss_cur) + std::fabs(loss_new));
            if (loss_new <= loss_cur + lin + sq / (2.0 * eta) + fp_slack) break;
            eta *= 0.5;
            if (eta < 1e-18) break;  // step has collapsed to numerical noise
        }

        double l1 = 0.0;
        for (const double v : w_new) l1 += std::fabs(v);
        const double obj_new = loss_new + l1;
        if (!std::isfinite(obj_new)) throw DataError("objective became non-finite");

        res.weights.swap(w_new);
        b = b_new;
        loss_cur = loss_new;
        res.iterations = iter;
        if (opts.trajectory) opts.trajectory->push_back(obj_new);

        if (obj_prev - obj_new <= opts.tol * std::max(std::fabs(obj_prev), 1e-12)) {
            res.converged = true;
            obj_prev = obj_new;
            break;
        }
        obj_prev = obj_new;
        eta = std::min(eta * 2.0, 1e15);
    }
    res.objective = obj_prev;
    return res;
}

ProxyModel train_proxy(const TokenizerModel& model, const TaskDataset& train,
                       const ProxyOptions& opts) {
    if (train.instances.empty()) throw DataError("empty training set");
    if (train.label_space.size() < 2) {
        throw DataError("training set needs at least 2 distinct labels, got " +
                        std::to_string(train.label_space.size()));
    }

    auto [space, X] = featurize(model, train, {opts.feature_cap, opts.threads});

    ProxyModel proxy;
    proxy.space = std::move(space);
    proxy.label_space = train.label_space;
    proxy.task_kind = train.task_kind;
    proxy.pair_mode = train.pair_mode;
    proxy.C = opts.C;

    const size_t n_classifiers =
        train.task_kind == TaskKind::Binary ? 1 : train.label_space.size();
    proxy.classifiers.resize(n_classifiers);

    std::vector<std::exception_ptr> failures(n_classifiers);
    parallel_chunks(n_classifiers, resolve_thread_count(opts.threads),
                    [&](size_t, size_t begin, size_t end) {
                        for (size_t k = begin; k < end; ++k) {
                            try {
                                const uint32_t positive_label =
                                    train.task_kind == TaskKind::Binary ? 1u
                                                                        : static_cast<uint32_t>(k);
                                std::vector<int8_t> yk(train.instances.size());
                                size_t positives = 0;
                                for (size_t i = 0; i < train.instances.size(); ++i) {
                                    const auto& labels = train.instances[i].labels;
                                    const bool pos = std::binary_search(labels.begin(),
                                                                        labels.end(),
                                                                        positive_label);
                                    yk[i] = pos ? 1 : 0;
                                    positives += pos;
                                }
                                if (positives == 0 || positives == train.instances.size()) {
                                    throw DataError(
                                        "degenerate label distribution: label `" +
                                        train.label_space[positive_label] + "` is positive on " +
                                        std::to_string(positives) + " of " +
                                        std::to_string(train.instances.size()) +
                                        " training instances");
                                }
                                SolveOptions sopts;
                                sopts.C = opts.C;
                                sopts.tol = opts.tol;
                                sopts.max_iter = opts.max_iter;
                                const SolveResult r =
                                    train_logreg(X, yk, proxy.space.size(), sopts);
                                proxy.classifiers[k] = {r.weights, r.intercept, r.iterations,
                                                        r.objective, r.converged};
                            } catch (...) {
                                failures[k] = std::current_exception();
                            }
                        }
                    });
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
    return proxy;
}

std::vector<std::vector<double>> proxy_scores(const ProxyModel& proxy,
                                              const TokenizerModel& model,
                                              const TaskDataset& ds, int threads) {
    if (ds.pair_mode != proxy.pair_mode) {
        throw DataError("dataset pair mode `" + pair_mode_name(ds.pair_mode) +
                        "` does not match the proxy's `" + pair_mode_name(proxy.pair_mode) + "`");
    }
    const SparseBinaryMatrix X = featurize_with(proxy.space, model, ds, threads);
    const size_t n_labels = proxy.label_space.size();
    std::vector<std::vector<double>> scores(X.rows(), std::vector<double>(n_labels, 0.0));
    for (size_t i = 0; i < X.rows(); ++i) {
        if (proxy.task_kind == TaskKind::Binary) {
            const ProxyClassifier& clf = proxy.classifiers.at(0);
            double z = clf.intercept;
            for (const uint32_t j : X.row(i)) z += clf.weights[j];
            scores[i][0] = 0.0;  // reference class; argmax picks it on z <= 0
            scores[i][1] = z;
        } else {
            for (size_t k = 0; k < n_labels; ++k) {
                const ProxyClassifier& clf = proxy.classifiers.at(k);
                double z = clf.intercept;
                for (const uint32_t j : X.row(i)) z += clf.weights[j];
                scores[i][k] = z;
            }
        }
    }
    return scores;
}

EvalReport evaluate_proxy(const ProxyModel& proxy, const TokenizerModel& model,
                          const TaskDataset& eval_set, F1Average f1, int threads) {
    if (eval_set.instances.empty()) throw DataError("empty eval set");

    // Map eval labels into the training label space by name.
    std::vector<uint32_t> remap(eval_set.label_space.size());
    for (size_t i = 0; i < eval_set.label_space.size(); ++i) {
        const auto it = std::find(proxy.label_space.begin(), proxy.label_space.end(),
                                  eval_set.label_space[i]);
        if (it == proxy.label_space.end()) {
            throw DataError("eval label `" + eval_set.label_space[i] +
                            "` does not appear in the training label space");
        }
        remap[i] = static_cast<uint32_t>(it - proxy.label_space.begin());
    }

    const std::vector<std::vector<double>> scores = proxy_scores(proxy, model, eval_set, threads);
    const size_t n = eval_set.instances.size();

    EvalReport report;
    report.instances = n;

    if (proxy.task_kind != TaskKind::Multilabel) {
        size_t correct = 0;
        for (size_t i = 0; i < n; ++i) {
            const auto& labels = eval_set.instances[i].labels;
            if (labels.size() != 1) {
                throw DataError("eval instance " + std::to_string(i) + " has " +
                                std::to_string(labels.size()) + " labels but the proxy is " +
                                task_kind_name(proxy.task_kind));
            }
            size_t pred = 0;
            for (size_t k = 1; k < scores[i].size(); ++k) {
                if (scores[i][k] > scores[i][pred]) pred = k;  // ties keep the lowest index
            }
            correct += pred == remap[labels[0]];
        }
        report.metric = "accuracy";
        report.value = static_cast<double>(correct) / static_cast<double>(n);
        return report;
    }

    const size_t n_labels = proxy.label_space.size();
    std::vector<uint64_t> tp(n_labels, 0), fp(n_labels, 0), fn(n_labels, 0);
    for (size_t i = 0; i < n; ++i) {
        std::vector<char> gold(n_labels, 0);
        for (const uint32_t l : eval_set.instances[i].labels) gold[remap[l]] = 1;
        for (size_t k = 0; k < n_labels; ++k) {
            const bool predicted = scores[i][k] > 0.0;
            if (predicted && gold[k]) ++tp[k];
            if (predicted && !gold[k]) ++fp[k];
            if (!predicted && gold[k]) ++fn[k];
        }
    }
    if (f1 == F1Average::Macro) {
        double sum = 0.0;
        for (size_t k = 0; k < n_labels; ++k) {
            const uint64_t den = 2 * tp[k] + fp[k] + fn[k];
            sum += den == 0 ? 0.0 : 2.0 * static_cast<double>(tp[k]) / static_cast<double>(den);
        }
        report.metric = "macro_f1";
        report.value = sum / static_cast<double>(n_labels);
    } else {
        uint64_t stp = 0, sfp = 0, sfn = 0;
        for (size_t k = 0; k < n_labels; ++k) {
            stp += tp[k];
            sfp += fp[k];
            sfn += fn[k];
        }
        const uint64_t den = 2 * stp + sfp + sfn;
        report.metric = "micro_f1";
        report.value = den == 0 ? 0.0 : 2.0 * static_cast<double>(stp) / static_cast<double>(den);
    }
    return report;
}

}  // namespace tokeval
