"""Task execution: fan out items to a model client under one scoring mode
and account for every outcome."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from ..cot.prompts import render_options
from ..types import BenchmarkItem
from .client import ModelClient
from .scoring import (
    DEFAULT_REASONING_DELIMITERS,
    ItemResult,
    Normalizer,
    Outcome,
    ScoringMode,
    score_loglik,
    score_parsed,
)

logger = logging.getLogger(__name__)

DEFAULT_PROMPT_TEMPLATE = (
    "{context}السؤال التالي متبوع بخيارات، اختر الإجابة الصحيحة.\n"
    "{question}\n{options}\nAnswer with the letter of the correct option."
)


def render_prompt(item: BenchmarkItem, template: str = DEFAULT_PROMPT_TEMPLATE) -> str:
    context = f"{item.context}\n\n" if item.context else ""
    return (
        template.replace("{context}", context)
        .replace("{question}", item.question)
        .replace("{options}", render_options(item))
    )


@dataclass
class BenchmarkScore:
    suite: str
    accuracy: float  # percent, unrounded; round only at display
    n_items: int
    correct: int
    incorrect: int
    invalid: int

    def __post_init__(self):
        if self.correct + self.incorrect + self.invalid != self.n_items:
            raise ValueError("outcome counts must sum to n_items")

    def to_obj(self) -> dict:
        return {
            "suite": self.suite,
            "accuracy": self.accuracy,
            "n_items": self.n_items,
            "counts": {"correct": self.correct, "incorrect": self.incorrect,
                       "invalid": self.invalid},
        }


def tally(suite: str, results: Sequence[ItemResult]) -> BenchmarkScore:
    """Counts and accuracy; Invalid scores as not-correct."""
    correct = sum(1 for r in results if r.outcome is Outcome.CORRECT)
    incorrect = sum(1 for r in results if r.outcome is Outcome.INCORRECT)
    invalid = sum(1 for r in results if r.outcome is Outcome.INVALID)
    n = len(results)
    return BenchmarkScore(
        suite=suite,
        accuracy=100.0 * correct / n if n else 0.0,
        n_items=n,
        correct=correct,
        incorrect=incorrect,
        invalid=invalid,
    )


def run_task(
    items: list[BenchmarkItem],
    mode: ScoringMode,
    client: ModelClient,
    *,
    prompt_template: str = DEFAULT_PROMPT_TEMPLATE,
    normalizer: Normalizer = Normalizer.BYTE_LENGTH,
    delimiters: tuple[str, str] = DEFAULT_REASONING_DELIMITERS,
    arabic_letters: bool = True,
    jobs: int = 1,
) -> tuple[BenchmarkScore, list[ItemResult]]:
    """One ItemResult per item, ordered as given; the run never aborts on
    a per-item failure."""
    if not items:
        raise ValueError("empty task")
    suites = {item.suite for item in items}
    if len(suites) > 1:
        raise ValueError(f"run_task expects one suite per run, got {sorted(s.value for s in suites)}")
    suite = items[0].suite.value

    def score_one(item: BenchmarkItem) -> ItemResult:
        prompt = render_prompt(item, prompt_template)
        if mode is ScoringMode.LOGLIK_NORM:
            return score_loglik(item, client, normalizer, prompt)
        try:
            output = client.complete(prompt)
        except Exception as exc:
            logger.warning("completion failed for %s: %s", item.task_id, exc)
            return ItemResult(
                task_id=item.task_id, mode=mode, predicted=None, gold=item.gold_index,
                outcome=Outcome.INVALID, error=str(exc),
            )
        return score_parsed(item, output, delimiters, arabic_letters)

    if jobs <= 1:
        results = [score_one(item) for item in items]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(score_one, items))

    return tally(suite, results), results


def write_results(path: str | Path, results: Iterable[ItemResult]) -> int:
    n = 0
    with Path(path).open("w", encoding="utf-8") as fh:
        for result in results:
            fh.write(json.dumps(result.to_obj(), ensure_ascii=False) + "\n")
            n += 1
    return n


def write_summary(path: str | Path, score: BenchmarkScore, mode: ScoringMode,
                  config_digest: str) -> None:
    obj = {**score.to_obj(), "mode": mode.value, "config_digest": config_digest}
    Path(path).write_text(
        json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8"
    )
