"""Complexity stratification of question sets into equal-population buckets."""

from __future__ import annotations

from typing import Callable, Sequence

from ..tokenize import DEFAULT_TOKENIZER
from ..types import BenchmarkItem


def complexity_score(
    item: BenchmarkItem,
    max_len: int,
    max_opts: int,
    length_weight: float = 0.5,
    options_weight: float = 0.5,
) -> float:
    """Weighted blend of normalized question length and option count."""
    length = DEFAULT_TOKENIZER.count_tokens(item.question)
    norm_len = length / max_len if max_len else 0.0
    norm_opts = len(item.options) / max_opts if max_opts else 0.0
    return length_weight * norm_len + options_weight * norm_opts


def stratify(
    items: Sequence[BenchmarkItem],
    buckets: int,
    scorer: Callable[[BenchmarkItem], float] | None = None,
) -> dict[int, list[BenchmarkItem]]:
    """Partition items into ``buckets`` quantile groups by complexity.

    Bucket 0 holds the least complex items; populations differ by at most
    one. A custom ``scorer`` replaces the default length+options blend.
    Deterministic: ties keep input order.
    """
    if buckets < 1:
        raise ValueError(f"buckets must be >= 1, got {buckets}")
    if not items:
        raise ValueError("cannot stratify zero items")

    if scorer is None:
        max_len = max(DEFAULT_TOKENIZER.count_tokens(it.question) for it in items)
        max_opts = max(len(it.options) for it in items)
        scorer = lambda it: complexity_score(it, max_len, max_opts)  # noqa: E731

    ranked = sorted(range(len(items)), key=lambda i: (scorer(items[i]), i))

    n = len(items)
    base, rem = divmod(n, buckets)
    out: dict[int, list[BenchmarkItem]] = {}
    cursor = 0
    for b in range(buckets):
        size = base + (1 if b < rem else 0)
        out[b] = [items[i] for i in ranked[cursor:cursor + size]]
        cursor += size
    return out
