"""mazij: bilingual corpus curation and evaluation toolkit.

Pipeline stages, each usable as a library or through the ``mazij`` CLI:
JSONL ingestion and Arabic-aware normalization; benchmark-overlap
decontamination (exact n-gram + MinHash/LSH + classifier hook);
near-duplicate and quality filtering; token-budgeted 80/20 mixture
assembly; four-phase reasoning-trace generation and validation; and a
dual-mode multiple-choice evaluation harness with leaderboard arithmetic.
"""

from ._version import __version__
from .normalize import NORMALIZATION_VERSION, NormalizedText, canonicalize, normalize, shingles
from .tokenize import DEFAULT_TOKENIZER, TokenizerHandle, WhitespacePunctTokenizer, count_tokens
from .types import (
    ALL_SUITES,
    BenchmarkItem,
    Category,
    Dialect,
    Document,
    InvariantViolation,
    Language,
    Suite,
)

__all__ = [
    "ALL_SUITES",
    "BenchmarkItem",
    "Category",
    "DEFAULT_TOKENIZER",
    "Dialect",
    "Document",
    "InvariantViolation",
    "Language",
    "NORMALIZATION_VERSION",
    "NormalizedText",
    "Suite",
    "TokenizerHandle",
    "WhitespacePunctTokenizer",
    "__version__",
    "canonicalize",
    "count_tokens",
    "normalize",
    "shingles",
]
