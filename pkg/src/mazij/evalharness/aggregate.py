"""Leaderboard arithmetic: suite-set averages and margins against
published reference scores. Scores are percents; rounding happens only at
display time, to two decimals."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from ..types import ALL_SUITES, Suite

DEFAULT_SUITE_SET = tuple(s.value for s in ALL_SUITES)


def display(value: float) -> str:
    return f"{value:.2f}"


def aggregate(
    scores: Mapping[str, float], required_suites: tuple[str, ...] = DEFAULT_SUITE_SET
) -> float:
    """Unweighted arithmetic mean over the required suite set."""
    missing = [s for s in required_suites if s not in scores]
    if missing:
        raise ValueError(f"missing suites: {', '.join(missing)}")
    return sum(scores[s] for s in required_suites) / len(required_suites)


@dataclass(frozen=True)
class ReferenceScore:
    model: str
    suite: str
    value: float


def load_reference_scores(path: str | Path) -> dict[str, dict[str, float]]:
    """Reference file: {"models": {model name: {suite: percent}}}."""
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    models = obj["models"] if "models" in obj else obj
    out: dict[str, dict[str, float]] = {}
    for model, scores in models.items():
        for suite in scores:
            Suite(suite)  # reject unknown suite names early
        out[model] = {suite: float(v) for suite, v in scores.items()}
    return out


def reference_rows(scores_by_model: Mapping[str, Mapping[str, float]]) -> list[ReferenceScore]:
    return [
        ReferenceScore(model=model, suite=suite, value=value)
        for model, suite_scores in scores_by_model.items()
        for suite, value in suite_scores.items()
    ]


@dataclass
class MarginTable:
    """Per-suite and average margins of ours minus a reference model."""

    reference_model: str
    per_suite: dict[str, float]
    average_margin: float

    def to_obj(self) -> dict:
        return {
            "reference_model": self.reference_model,
            "per_suite": self.per_suite,
            "average_margin": self.average_margin,
        }


def compare(
    ours: Mapping[str, float],
    reference: Mapping[str, float],
    reference_model: str = "reference",
) -> MarginTable:
    """Margins over the overlapping suites; the average margin is the mean
    of per-suite margins (equal to the difference of averages at full
    overlap)."""
    overlap = [s for s in ours if s in reference]
    if not overlap:
        raise ValueError("no overlapping suites between ours and reference")
    per_suite = {s: ours[s] - reference[s] for s in overlap}
    return MarginTable(
        reference_model=reference_model,
        per_suite=per_suite,
        average_margin=sum(per_suite.values()) / len(per_suite),
    )
