#include "tokeval/cli.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "tokeval/bpe.hpp"
#include "tokeval/corpus.hpp"
#include "tokeval/dataset.hpp"
#include "tokeval/errors.hpp"
#include "tokeval/metrics.hpp"
#include "tokeval/proxy.hpp"
#include "tokeval/report.hpp"
#include "tokeval/stats.hpp"

namespace tokeval {

namespace {

struct CorpusFlags {
    std::string path;
    std::string format = "plain-lines";
    bool lossy = false;
};

void add_corpus_flags(CLI::App* sub, CorpusFlags& cf) {
    sub->add_option("--corpus", cf.path, "corpus file")->required();
    sub->add_option("--corpus-format", cf.format, "plain-lines or one-doc-per-record")
        ->capture_default_str();
    sub->add_flag("--lossy", cf.lossy, "replace malformed UTF-8 instead of failing");
}

Corpus load_from_flags(const CorpusFlags& cf) {
    LoadOptions opt;
    opt.format = corpus_format_from_name(cf.format);
    opt.lossy = cf.lossy;
    return load_corpus(cf.path, opt);
}

void echo_corpus_flags(Report& report, const CorpusFlags& cf) {
    report.add_config("corpus", cf.path);
    report.add_config("corpus_format", cf.format);
    report.add_config("lossy", cf.lossy);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> read_label_lines(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<std::string> lines;
    size_t start = 0;
    while (start < text.size()) {
        size_t pos = text.find('\n', start);
        if (pos == std::string::npos) pos = text.size();
        lines.emplace_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    if (lines.empty()) throw DataError(path + " is empty");
    return lines;
}

std::vector<double> read_float_lines(const std::string& path) {
    std::vector<double> values;
    for (const std::string& line : read_label_lines(path)) {
        size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(line, &pos);
        } catch (const std::exception&) {
            throw DataError(path + ": not a number: `" + line + "`");
        }
        if (pos != line.size()) throw DataError(path + ": not a number: `" + line + "`");
        values.push_back(v);
    }
    return values;
}

// Prints the TSV form and, when a prefix was given, writes prefix.tsv/.json.
void emit(const Report& report, const std::string& prefix, std::ostream& out) {
    out << report.to_tsv();
    if (!prefix.empty()) report.write_files(prefix);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"train byte-level BPE tokenizers and pre-evaluate their downstream impact",
                 "tokeval"};
    app.require_subcommand(1);

    // fit
    CorpusFlags fit_corpus;
    std::string fit_pretokenizer = "gpt2";
    size_t fit_vocab_size = 32000;
    std::string fit_out;
    std::string fit_report;
    int fit_threads = 0;
    int64_t fit_seed = 0;
    auto* fit = app.add_subcommand("fit", "train a BPE tokenizer on a corpus");
    add_corpus_flags(fit, fit_corpus);
    fit->add_option("--pretokenizer", fit_pretokenizer, "no, ws, _ws, gpt2 or llama3")
        ->capture_default_str();
    fit->add_option("--vocab-size", fit_vocab_size, "target vocabulary size incl. 256 bytes")
        ->capture_default_str();
    fit->add_option("--out", fit_out, "model file to write")->required();
    fit->add_option("--report", fit_report, "report file prefix (.tsv/.json)");
    fit->add_option("--threads", fit_threads, "worker threads (0 = auto)");
    fit->add_option("--seed", fit_seed, "seed echoed into reports (reserved)");

    // encode
    CorpusFlags enc_corpus;
    std::string enc_model;
    std::string enc_out;
    std::string enc_report;
    bool enc_render = false;
    int64_t enc_seed = 0;
    auto* enc = app.add_subcommand("encode", "encode a corpus with a trained model");
    enc->add_option("--model", enc_model, "model file")->required();
    add_corpus_flags(enc, enc_corpus);
    enc->add_flag("--render", enc_render,
                  "print readable tokens (whitespace as _) instead of ids");
    enc->add_option("--out", enc_out, "output file (default: stdout)");
    enc->add_option("--report", enc_report, "report file prefix (.tsv/.json)");
    enc->add_option("--seed", enc_seed, "seed echoed into reports (reserved)");

    // stats
    CorpusFlags st_corpus;
    std::string st_model;
    double st_alpha = 2.5;
    std::string st_report;
    int st_threads = 0;
    int64_t st_seed = 0;
    auto* st = app.add_subcommand("stats", "intrinsic metrics of a model over a corpus");
    st->add_option("--model", st_model, "model file")->required();
    add_corpus_flags(st, st_corpus);
    st->add_option("--alpha", st_alpha, "Renyi order (> 0, != 1)")->capture_default_str();
    st->add_option("--report", st_report, "report file prefix (.tsv/.json)");
    st->add_option("--threads", st_threads, "worker threads (0 = auto)");
    st->add_option("--seed", st_seed, "seed echoed into reports (reserved)");

    // proxy
    std::string px_model;
    std::string px_train;
    std::string px_eval;
    std::string px_pair_mode = "none";
    double px_c = 0.4;
    double px_tol = 1e-6;
    int px_max_iter = 10000;
    size_t px_feature_cap = 5'000'000;
    std::string px_f1 = "macro";
    std::string px_report;
    int px_threads = 0;
    int64_t px_seed = 0;
    auto* px = app.add_subcommand(
        "proxy", "train and evaluate the logistic-regression task proxy");
    px->add_option("--model", px_model, "tokenizer model file")->required();
    px->add_option("--train", px_train, "training TSV")->required();
    px->add_option("--eval", px_eval, "evaluation TSV")->required();
    px->add_option("--pair-mode", px_pair_mode, "none, cartesian or shared_disjoint")
        ->capture_default_str();
    px->add_option("--c", px_c, "inverse regularization strength on the loss")
        ->capture_default_str();
    px->add_option("--tol", px_tol, "relative objective tolerance")->capture_default_str();
    px->add_option("--max-iter", px_max_iter, "solver iteration cap")->capture_default_str();
    px->add_option("--feature-cap", px_feature_cap, "maximum feature count")
        ->capture_default_str();
    px->add_option("--f1-average", px_f1, "macro or micro (multilabel only)")
        ->capture_default_str();
    px->add_option("--report", px_report, "report file prefix (.tsv/.json)");
    px->add_option("--threads", px_threads, "worker threads (0 = auto)");
    px->add_option("--seed", px_seed, "seed echoed into reports (reserved)");

    // mcnemar
    std::string mc_gold;
    std::vector<std::string> mc_preds;
    std::string mc_method = "auto";
    int64_t mc_bonferroni = 0;
    std::string mc_scores;
    std::string mc_report;
    int64_t mc_seed = 0;
    auto* mc = app.add_subcommand("mcnemar",
                                  "pairwise McNemar tests between prediction files");
    mc->add_option("--gold", mc_gold, "gold labels, one per line")->required();
    mc->add_option("--pred", mc_preds, "prediction file (repeat; needs at least two)")
        ->required()
        ->expected(2, CLI::detail::expected_max_vector_size);
    mc->add_option("--method", mc_method, "auto, chi2_corrected or exact_binomial")
        ->capture_default_str();
    mc->add_option("--bonferroni-m", mc_bonferroni,
                   "number of comparisons (0 = number of pairs)");
    mc->add_option("--scores", mc_scores,
                   "per-system scores, one per line; sorts the report by score");
    mc->add_option("--report", mc_report, "report file prefix (.tsv/.json)");
    mc->add_option("--seed", mc_seed, "seed echoed into reports (reserved)");

    // correlate
    std::string co_x;
    std::string co_y;
    std::string co_report;
    int64_t co_seed = 0;
    auto* co = app.add_subcommand("correlate", "Pearson correlation of two value files");
    co->add_option("--x", co_x, "values, one per line")->required();
    co->add_option("--y", co_y, "values, one per line")->required();
    co->add_option("--report", co_report, "report file prefix (.tsv/.json)");
    co->add_option("--seed", co_seed, "seed echoed into reports (reserved)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (fit->parsed()) {
            const Corpus corpus = load_from_flags(fit_corpus);
            TrainConfig config;
            config.vocab_size = fit_vocab_size;
            config.pretokenizer = PreTokenizerSpec::from_name(fit_pretokenizer);
            config.threads = fit_threads;
            const TokenizerModel model = train_bpe(corpus, config);
            model.save(fit_out);

            Report report;
            report.add_config("subcommand", std::string("fit"));
            echo_corpus_flags(report, fit_corpus);
            report.add_config("pretokenizer", fit_pretokenizer);
            report.add_config("vocab_size", static_cast<uint64_t>(fit_vocab_size));
            report.add_config("out", fit_out);
            report.add_config("seed", fit_seed);
            report.add("documents", static_cast<uint64_t>(corpus.documents.size()));
            report.add("word_count", word_count(corpus));
            report.add("achieved_vocab_size", static_cast<uint64_t>(model.vocab_size()));
            report.add("merges", static_cast<uint64_t>(model.merges().size()));
            emit(report, fit_report, out);
        } else if (enc->parsed()) {
            const TokenizerModel model = TokenizerModel::load(enc_model);
            const Corpus corpus = load_from_flags(enc_corpus);
            Encoder encoder(model);

            std::ofstream file;
            if (!enc_out.empty()) {
                file.open(enc_out, std::ios::binary);
                if (!file) throw DataError("cannot open " + enc_out + " for writing");
            }
            std::ostream& sink = enc_out.empty() ? out : file;
            uint64_t total_tokens = 0;
            for (const std::string& doc : corpus.documents) {
                const std::vector<TokenId> ids = encoder.encode(doc);
                total_tokens += ids.size();
                for (size_t i = 0; i < ids.size(); ++i) {
                    if (i > 0) sink << ' ';
                    if (enc_render) {
                        sink << render_token(model.token_bytes(ids[i]));
                    } else {
                        sink << ids[i];
                    }
                }
                sink << '\n';
            }
            if (!enc_out.empty() && !file) throw DataError("failed writing " + enc_out);

            if (!enc_report.empty()) {
                Report report;
                report.add_config("subcommand", std::string("encode"));
                report.add_config("model", enc_model);
                echo_corpus_flags(report, enc_corpus);
                report.add_config("render", enc_render);
                report.add_config("out", enc_out.empty() ? std::string("-") : enc_out);
                report.add_config("seed", enc_seed);
                report.add("documents", static_cast<uint64_t>(corpus.documents.size()));
                report.add("tokens", total_tokens);
                report.write_files(enc_report);
            }
        } else if (st->parsed()) {
            const TokenizerModel model = TokenizerModel::load(st_model);
            const Corpus corpus = load_from_flags(st_corpus);
            const MetricReport metrics =
                compute_metric_report(model, corpus, st_alpha, st_threads);

            Report report;
            report.add_config("subcommand", std::string("stats"));
            report.add_config("model", st_model);
            echo_corpus_flags(report, st_corpus);
            report.add_config("alpha", st_alpha);
            report.add_config("seed", st_seed);
            report.add("corpus_token_count", metrics.corpus_token_count);
            report.add("shannon_entropy", metrics.shannon_entropy);
            report.add("renyi_entropy", metrics.renyi_entropy);
            report.add("alpha", metrics.alpha);
            report.add("renyi_efficiency_full_vocab", metrics.renyi_efficiency_full_vocab);
            report.add("renyi_efficiency_observed_vocab",
                       metrics.renyi_efficiency_observed_vocab);
            report.add("vocabulary_coverage", metrics.vocabulary_coverage);
            report.add("vocab_size", metrics.vocab_size);
            report.add("observed_types", metrics.observed_types);
            emit(report, st_report, out);
        } else if (px->parsed()) {
            const TokenizerModel model = TokenizerModel::load(px_model);
            TaskDataset train = load_task_tsv(px_train);
            TaskDataset eval_set = load_task_tsv(px_eval);
            const PairMode mode = pair_mode_from_name(px_pair_mode);
            set_pair_mode(train, mode);
            set_pair_mode(eval_set, mode);
            const F1Average f1 = [&] {
                if (px_f1 == "macro") return F1Average::Macro;
                if (px_f1 == "micro") return F1Average::Micro;
                throw UsageError("unknown --f1-average: " + px_f1 + " (expected macro or micro)");
            }();

            ProxyOptions opts;
            opts.C = px_c;
            opts.tol = px_tol;
            opts.max_iter = px_max_iter;
            opts.feature_cap = px_feature_cap;
            opts.threads = px_threads;
            const ProxyModel proxy = train_proxy(model, train, opts);
            const EvalReport eval = evaluate_proxy(proxy, model, eval_set, f1, px_threads);

            bool all_converged = true;
            for (const ProxyClassifier& clf : proxy.classifiers) {
                all_converged = all_converged && clf.converged;
            }

            Report report;
            report.add_config("subcommand", std::string("proxy"));
            report.add_config("model", px_model);
            report.add_config("train", px_train);
            report.add_config("eval", px_eval);
            report.add_config("pair_mode", px_pair_mode);
            report.add_config("c", px_c);
            report.add_config("tol", px_tol);
            report.add_config("max_iter", static_cast<int64_t>(px_max_iter));
            report.add_config("feature_cap", static_cast<uint64_t>(px_feature_cap));
            report.add_config("f1_average", px_f1);
            report.add_config("seed", px_seed);
            report.add("task_kind", task_kind_name(proxy.task_kind));
            report.add("labels", static_cast<uint64_t>(proxy.label_space.size()));
            report.add("features", static_cast<uint64_t>(proxy.space.size()));
            report.add("classifiers", static_cast<uint64_t>(proxy.classifiers.size()));
            report.add("train_instances", static_cast<uint64_t>(train.instances.size()));
            report.add("eval_instances", static_cast<uint64_t>(eval.instances));
            report.add("all_converged", all_converged);
            report.add("metric", eval.metric);
            report.add("value", eval.value);
            emit(report, px_report, out);
        } else if (mc->parsed()) {
            const std::vector<std::string> gold = read_label_lines(mc_gold);
            std::vector<std::vector<std::string>> preds;
            for (const std::string& path : mc_preds) {
                preds.push_back(read_label_lines(path));
                if (preds.back().size() != gold.size()) {
                    throw DataError(path + " has " + std::to_string(preds.back().size()) +
                                    " labels, gold has " + std::to_string(gold.size()));
                }
            }
            const McNemarMethod method = mcnemar_method_from_name(mc_method);

            std::vector<size_t> order(mc_preds.size());
            std::iota(order.begin(), order.end(), 0);
            if (!mc_scores.empty()) {
                const std::vector<double> scores = read_float_lines(mc_scores);
                if (scores.size() != mc_preds.size()) {
                    throw DataError("--scores has " + std::to_string(scores.size()) +
                                    " values for " + std::to_string(mc_preds.size()) +
                                    " systems");
                }
                std::stable_sort(order.begin(), order.end(),
                                 [&](size_t a, size_t b) { return scores[a] > scores[b]; });
            }

            const size_t k = mc_preds.size();
            const size_t pairs = k * (k - 1) / 2;
            const size_t m = mc_bonferroni > 0 ? static_cast<size_t>(mc_bonferroni) : pairs;

            std::vector<std::vector<std::string>> rows;
            for (size_t a = 0; a < k; ++a) {
                for (size_t b = a + 1; b < k; ++b) {
                    PairedPredictions pp{gold, preds[order[a]], preds[order[b]]};
                    const McNemarResult r = mcnemar(pp, method, m);
                    rows.push_back({mc_preds[order[a]], mc_preds[order[b]],
                                    std::to_string(r.b), std::to_string(r.c),
                                    mcnemar_method_name(r.method),
                                    Report::format_value(r.statistic),
                                    Report::format_value(r.p_raw),
                                    Report::format_value(r.p_adjusted)});
                }
            }

            Report report;
            report.add_config("subcommand", std::string("mcnemar"));
            report.add_config("gold", mc_gold);
            std::string joined;
            for (size_t i = 0; i < mc_preds.size(); ++i) {
                if (i > 0) joined += ",";
                joined += mc_preds[i];
            }
            report.add_config("preds", joined);
            report.add_config("method", mc_method);
            report.add_config("bonferroni_m", static_cast<uint64_t>(m));
            report.add_config("scores", mc_scores);
            report.add_config("seed", mc_seed);
            report.add("systems", static_cast<uint64_t>(k));
            report.add("comparisons", static_cast<uint64_t>(pairs));
            report.set_table({"system_a", "system_b", "b", "c", "method", "statistic", "p_raw",
                              "p_adjusted"},
                             std::move(rows));
            emit(report, mc_report, out);
        } else if (co->parsed()) {
            const std::vector<double> xs = read_float_lines(co_x);
            const std::vector<double> ys = read_float_lines(co_y);
            const double r = pearson(xs, ys);

            Report report;
            report.add_config("subcommand", std::string("correlate"));
            report.add_config("x", co_x);
            report.add_config("y", co_y);
            report.add_config("seed", co_seed);
            report.add("n", static_cast<uint64_t>(xs.size()));
            report.add("pearson_r", r);
            emit(report, co_report, out);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace tokeval
