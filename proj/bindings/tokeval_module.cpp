#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "tokeval/bpe.hpp"
#include "tokeval/cli.hpp"
#include "tokeval/corpus.hpp"
#include "tokeval/dataset.hpp"
#include "tokeval/errors.hpp"
#include "tokeval/metrics.hpp"
#include "tokeval/pretokenize.hpp"
#include "tokeval/proxy.hpp"
#include "tokeval/stats.hpp"

namespace py = pybind11;
using namespace tokeval;

namespace {

void bind_corpus(py::module_& m) {
    py::class_<Corpus>(m, "Corpus")
        .def_readonly("documents", &Corpus::documents)
        .def_readonly("source_name", &Corpus::source_name)
        .def("__len__", [](const Corpus& c) { return c.documents.size(); });

    m.def(
        "load_corpus",
        [](const std::string& path, const std::string& format, bool lossy) {
            LoadOptions opt;
            opt.format = corpus_format_from_name(format);
            opt.lossy = lossy;
            return load_corpus(path, opt);
        },
        py::arg("path"), py::arg("format") = "plain-lines", py::arg("lossy") = false);
    m.def("corpus_from_documents", &corpus_from_documents, py::arg("documents"),
          py::arg("source_name") = "<memory>");
    m.def("word_count",
          [](const std::string& text) { return word_count(text); }, py::arg("text"));
}

void bind_pretokenize(py::module_& m) {
    m.def(
        "pretokenize",
        [](const std::string& text, const std::string& pretokenizer) {
            return pretokenize_strings(PreTokenizerSpec::from_name(pretokenizer), text);
        },
        py::arg("text"), py::arg("pretokenizer") = "gpt2");
    m.def("pretokenizer_names", &pretokenizer_names);
    m.def(
        "pretokenizer_pattern",
        [](const std::string& name) {
            return std::string(PreTokenizerSpec::from_name(name).pattern());
        },
        py::arg("name"));
    m.def(
        "pretokenizer_behavior",
        [](const std::string& name) -> std::string {
            switch (PreTokenizerSpec::from_name(name).behavior()) {
                case MatchBehavior::WholeText: return "whole-text";
                case MatchBehavior::IsolatedMatches: return "isolated-matches";
                case MatchBehavior::DelimiterMergedWithNext:
                    return "delimiter-merged-with-next";
            }
            return "";
        },
        py::arg("name"));
}

void bind_bpe(py::module_& m) {
    py::class_<TokenizerModel>(m, "TokenizerModel")
        .def_property_readonly("vocab_size", &TokenizerModel::vocab_size)
        .def_property_readonly(
            "pretokenizer",
            [](const TokenizerModel& model) { return model.pretokenizer().name(); })
        .def_property_readonly("merges",
                               [](const TokenizerModel& model) {
                                   std::vector<std::pair<TokenId, TokenId>> out;
                                   for (const MergeRule& rule : model.merges())
                                       out.emplace_back(rule.left, rule.right);
                                   return out;
                               })
        .def("token_bytes",
             [](const TokenizerModel& model, TokenId id) {
                 return py::bytes(model.token_bytes(id));
             },
             py::arg("id"))
        .def("to_json", &TokenizerModel::to_json)
        .def("save", &TokenizerModel::save, py::arg("path"))
        .def_static("load", &TokenizerModel::load, py::arg("path"));

    py::class_<Encoder>(m, "Encoder")
        .def(py::init<const TokenizerModel&>(), py::arg("model"),
             py::keep_alive<1, 2>())
        .def("encode", &Encoder::encode, py::arg("text"));

    m.def(
        "train_bpe",
        [](const std::vector<std::string>& documents, size_t vocab_size,
           const std::string& pretokenizer, int threads) {
            TrainConfig config;
            config.vocab_size = vocab_size;
            config.pretokenizer = PreTokenizerSpec::from_name(pretokenizer);
            config.threads = threads;
            return train_bpe(corpus_from_documents(documents), config);
        },
        py::arg("documents"), py::arg("vocab_size") = 32000,
        py::arg("pretokenizer") = "gpt2", py::arg("threads") = 0);
    m.def(
        "encode",
        [](const TokenizerModel& model, const std::string& text) {
            return encode(model, text);
        },
        py::arg("model"), py::arg("text"));
    m.def(
        "decode",
        [](const TokenizerModel& model, const std::vector<TokenId>& ids) {
            return py::bytes(decode(model, ids));
        },
        py::arg("model"), py::arg("ids"));
    m.def(
        "render_token", [](const std::string& bytes) { return render_token(bytes); },
        py::arg("bytes"));
}

void bind_metrics(py::module_& m) {
    m.def(
        "token_distribution",
        [](const TokenizerModel& model, const std::vector<std::string>& documents,
           int threads) {
            const TokenDistribution dist =
                token_distribution(model, corpus_from_documents(documents), threads);
            py::dict out;
            out["counts"] = dist.counts;
            out["total"] = dist.total;
            out["observed_types"] = dist.observed_types;
            return out;
        },
        py::arg("model"), py::arg("documents"), py::arg("threads") = 0);
    m.def(
        "metric_report",
        [](const TokenizerModel& model, const std::vector<std::string>& documents,
           double alpha, int threads) {
            const MetricReport r = compute_metric_report(
                model, corpus_from_documents(documents), alpha, threads);
            py::dict out;
            out["corpus_token_count"] = r.corpus_token_count;
            out["shannon_entropy"] = r.shannon_entropy;
            out["renyi_entropy"] = r.renyi_entropy;
            out["alpha"] = r.alpha;
            out["renyi_efficiency_full_vocab"] = r.renyi_efficiency_full_vocab;
            out["renyi_efficiency_observed_vocab"] = r.renyi_efficiency_observed_vocab;
            out["vocabulary_coverage"] = r.vocabulary_coverage;
            out["vocab_size"] = r.vocab_size;
            out["observed_types"] = r.observed_types;
            return out;
        },
        py::arg("model"), py::arg("documents"), py::arg("alpha") = 2.5,
        py::arg("threads") = 0);
    m.def(
        "shannon_entropy",
        [](const std::vector<double>& probs) { return shannon_entropy(probs); },
        py::arg("probabilities"));
    m.def(
        "renyi_entropy",
        [](const std::vector<double>& probs, double alpha) {
            return renyi_entropy(probs, alpha);
        },
        py::arg("probabilities"), py::arg("alpha"));
}

void bind_proxy(py::module_& m) {
    py::class_<TaskDataset>(m, "TaskDataset")
        .def_property_readonly(
            "task_kind",
            [](const TaskDataset& d) { return std::string(task_kind_name(d.task_kind)); })
        .def_property_readonly(
            "pair_mode",
            [](const TaskDataset& d) { return std::string(pair_mode_name(d.pair_mode)); })
        .def_readonly("label_space", &TaskDataset::label_space)
        .def("__len__", [](const TaskDataset& d) { return d.instances.size(); })
        .def(
            "set_pair_mode",
            [](TaskDataset& d, const std::string& mode) {
                set_pair_mode(d, pair_mode_from_name(mode));
            },
            py::arg("mode"));

    m.def("load_task_tsv", &load_task_tsv, py::arg("path"));
    m.def("parse_task_tsv", &parse_task_tsv, py::arg("text"),
          py::arg("source_name") = "<memory>");
    m.def(
        "run_proxy",
        [](const TokenizerModel& model, const TaskDataset& train,
           const TaskDataset& eval_set, double C, double tol, int max_iter,
           size_t feature_cap, const std::string& f1_average, int threads) {
            ProxyOptions opts;
            opts.C = C;
            opts.tol = tol;
            opts.max_iter = max_iter;
            opts.feature_cap = feature_cap;
            opts.threads = threads;
            const ProxyModel proxy = train_proxy(model, train, opts);
            F1Average f1 = F1Average::Macro;
            if (f1_average == "micro") {
                f1 = F1Average::Micro;
            } else if (f1_average != "macro") {
                throw UsageError("unknown f1_average: " + f1_average);
            }
            const EvalReport r = evaluate_proxy(proxy, model, eval_set, f1, threads);
            bool all_converged = true;
            for (const ProxyClassifier& clf : proxy.classifiers)
                all_converged = all_converged && clf.converged;
            py::dict out;
            out["metric"] = r.metric;
            out["value"] = r.value;
            out["instances"] = r.instances;
            out["task_kind"] = std::string(task_kind_name(proxy.task_kind));
            out["labels"] = proxy.label_space;
            out["features"] = proxy.space.size();
            out["classifiers"] = proxy.classifiers.size();
            out["all_converged"] = all_converged;
            return out;
        },
        py::arg("model"), py::arg("train"), py::arg("eval"), py::arg("C") = 0.4,
        py::arg("tol") = 1e-6, py::arg("max_iter") = 10000,
        py::arg("feature_cap") = size_t{5'000'000}, py::arg("f1_average") = "macro",
        py::arg("threads") = 0);
}

py::dict mcnemar_dict(const McNemarResult& r) {
    py::dict out;
    out["b"] = r.b;
    out["c"] = r.c;
    out["method"] = mcnemar_method_name(r.method);
    out["statistic"] = r.statistic;
    out["p_raw"] = r.p_raw;
    out["p_adjusted"] = r.p_adjusted;
    return out;
}

void bind_stats(py::module_& m) {
    m.def(
        "mcnemar",
        [](uint64_t b, uint64_t c, const std::string& method, size_t bonferroni_m) {
            return mcnemar_dict(mcnemar(b, c, mcnemar_method_from_name(method),
                                        bonferroni_m));
        },
        py::arg("b"), py::arg("c"), py::arg("method") = "auto",
        py::arg("bonferroni_m") = size_t{1});
    m.def(
        "mcnemar_predictions",
        [](const std::vector<std::string>& gold, const std::vector<std::string>& preds_a,
           const std::vector<std::string>& preds_b, const std::string& method,
           size_t bonferroni_m) {
            PairedPredictions pp{gold, preds_a, preds_b};
            return mcnemar_dict(mcnemar(pp, mcnemar_method_from_name(method),
                                        bonferroni_m));
        },
        py::arg("gold"), py::arg("preds_a"), py::arg("preds_b"),
        py::arg("method") = "auto", py::arg("bonferroni_m") = size_t{1});
    m.def("bonferroni", &bonferroni, py::arg("p"), py::arg("m"));
    m.def("pearson", &pearson, py::arg("x"), py::arg("y"));
    m.def("regularized_gamma_p", &regularized_gamma_p, py::arg("a"), py::arg("x"));
    m.def("regularized_gamma_q", &regularized_gamma_q, py::arg("a"), py::arg("x"));
    m.def("chi2_survival", &chi2_survival, py::arg("x"), py::arg("dof"));
}

void bind_cli(py::module_& m) {
    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}

}  // namespace

PYBIND11_MODULE(_tokeval, m) {
    m.doc() = "byte-level BPE training and tokenizer pre-evaluation";
    py::register_exception<DataError>(m, "DataError");
    py::register_exception<UsageError>(m, "UsageError");
    bind_corpus(m);
    bind_pretokenize(m);
    bind_bpe(m);
    bind_metrics(m);
    bind_proxy(m);
    bind_stats(m);
    bind_cli(m);
}
