"""Byte-level BPE training and tokenizer pre-evaluation."""

from ._tokeval import (
    Corpus,
    DataError,
    Encoder,
    TaskDataset,
    TokenizerModel,
    UsageError,
    bonferroni,
    chi2_survival,
    corpus_from_documents,
    decode,
    encode,
    load_corpus,
    load_task_tsv,
    mcnemar,
    mcnemar_predictions,
    metric_report,
    parse_task_tsv,
    pearson,
    pretokenize,
    pretokenizer_behavior,
    pretokenizer_names,
    pretokenizer_pattern,
    regularized_gamma_p,
    regularized_gamma_q,
    render_token,
    renyi_entropy,
    run_cli,
    run_proxy,
    shannon_entropy,
    token_distribution,
    train_bpe,
    word_count,
)

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "DataError",
    "Encoder",
    "TaskDataset",
    "TokenizerModel",
    "UsageError",
    "bonferroni",
    "chi2_survival",
    "corpus_from_documents",
    "decode",
    "encode",
    "load_corpus",
    "load_task_tsv",
    "mcnemar",
    "mcnemar_predictions",
    "metric_report",
    "parse_task_tsv",
    "pearson",
    "pretokenize",
    "pretokenizer_behavior",
    "pretokenizer_names",
    "pretokenizer_pattern",
    "regularized_gamma_p",
    "regularized_gamma_q",
    "render_token",
    "renyi_entropy",
    "run_cli",
    "run_proxy",
    "shannon_entropy",
    "token_distribution",
    "train_bpe",
    "word_count",
]
