"""Reference-free accuracy scoring for simultaneous interpretation."""

from ._core import (
    BackendError,
    ConfigError,
    DataError,
    __version__,
    corpus_stats,
    cosine,
    default_prompt,
    five_number,
    fleiss_kappa,
    parse_score,
    pearson,
    ratings_kappa,
    run_study,
    validate_corpus,
)

__all__ = [
    "BackendError",
    "ConfigError",
    "DataError",
    "__version__",
    "corpus_stats",
    "cosine",
    "default_prompt",
    "five_number",
    "fleiss_kappa",
    "parse_score",
    "pearson",
    "ratings_kappa",
    "run_study",
    "validate_corpus",
]
