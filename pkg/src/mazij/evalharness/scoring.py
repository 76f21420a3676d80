"""Per-item scoring: normalized log-likelihood over options, and answer
extraction from reasoning-model output.

Extraction deliberately ignores everything up to the last closing
reasoning delimiter; models think in the delimited segment and answer
after it, so only the tail is authoritative.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .client import ModelClient
from ..types import BenchmarkItem
from ..cot.traces import option_letter


class ScoringMode(str, Enum):
    LOGLIK_NORM = "LogLikelihoodNorm"
    PARSE_AFTER_REASONING = "ParseAfterReasoning"


class Normalizer(str, Enum):
    BYTE_LENGTH = "ByteLength"
    TOKEN_LENGTH = "TokenLength"
    NONE = "None"


class Outcome(str, Enum):
    CORRECT = "Correct"
    INCORRECT = "Incorrect"
    INVALID = "Invalid"


@dataclass
class ItemResult:
    task_id: str
    mode: ScoringMode
    predicted: int | None
    gold: int
    outcome: Outcome
    per_option_scores: list[float] | None = None
    raw_output: str | None = None
    reasoning_span: tuple[int, int] | None = None
    error: str | None = None

    def __post_init__(self):
        if (self.outcome is Outcome.CORRECT) != (self.predicted == self.gold
                                                 and self.predicted is not None):
            raise ValueError("outcome Correct iff predicted == gold")
        if (self.outcome is Outcome.INVALID) != (self.predicted is None):
            raise ValueError("outcome Invalid iff predicted absent")

    def to_obj(self) -> dict:
        return {
            "task_id": self.task_id,
            "mode": self.mode.value,
            "predicted": self.predicted,
            "gold": self.gold,
            "outcome": self.outcome.value,
            "per_option_scores": self.per_option_scores,
            "raw_output": self.raw_output,
            "reasoning_span": list(self.reasoning_span) if self.reasoning_span else None,
            "error": self.error,
        }


def _outcome(predicted: int | None, gold: int) -> Outcome:
    if predicted is None:
        return Outcome.INVALID
    return Outcome.CORRECT if predicted == gold else Outcome.INCORRECT


def score_loglik(
    item: BenchmarkItem,
    client: ModelClient,
    norm: Normalizer = Normalizer.BYTE_LENGTH,
    prompt: str | None = None,
) -> ItemResult:
    """Argmax of per-option logprob divided by length under ``norm``.

    Ties break to the lowest option index. Endpoint failures and
    zero-length continuations mark the item Invalid with a cause instead
    of raising.
    """
    rendered = prompt if prompt is not None else item.question
    scores: list[float] = []
    try:
        for option in item.options:
            continuation = " " + option
            result = client.logprob(rendered, continuation)
            if norm is Normalizer.BYTE_LENGTH:
                length = result.byte_length
            elif norm is Normalizer.TOKEN_LENGTH:
                length = result.token_length
            else:
                length = 1
            if length <= 0:
                raise ValueError(
                    f"option {option_letter(len(scores))} has zero length under {norm.value}"
                )
            scores.append(result.logprob / length)
    except Exception as exc:
        return ItemResult(
            task_id=item.task_id, mode=ScoringMode.LOGLIK_NORM, predicted=None,
            gold=item.gold_index, outcome=Outcome.INVALID, error=str(exc),
        )

    best = max(range(len(scores)), key=lambda i: (scores[i], -i))
    return ItemResult(
        task_id=item.task_id,
        mode=ScoringMode.LOGLIK_NORM,
        predicted=best,
        gold=item.gold_index,
        outcome=_outcome(best, item.gold_index),
        per_option_scores=scores,
    )


#: Arabic option letters in conventional abjad-ish listing order, mapped to
#: option indices. Bare hamza-less forms are produced by canonicalization.
ARABIC_OPTION_LETTERS = ["ا", "ب", "ج", "د", "ه", "و", "ز", "ح"]
_ARABIC_LETTER_ALIASES = {"أ": "ا", "هـ": "ه"}

DEFAULT_REASONING_DELIMITERS = ("<think>", "</think>")

_ANSWER_PATTERNS = (
    # "Answer: B", "Final answer: B", "الإجابة النهائية: B"
    r"(?:answer|الإجابة|الاجابة|الجواب)[^:\n]{0,40}:\s*\(?([A-Za-zء-ي][ـ]?)\)?",
)


def _letter_to_index(letter: str, n_options: int, arabic_letters: bool) -> int | None:
    letter = _ARABIC_LETTER_ALIASES.get(letter, letter)
    if letter.upper() in "ABCDEFGHIJKLMNOPQRSTUVWXYZ":
        idx = ord(letter.upper()) - ord("A")
        return idx if idx < n_options else None
    if arabic_letters and letter in ARABIC_OPTION_LETTERS:
        idx = ARABIC_OPTION_LETTERS.index(letter)
        return idx if idx < n_options else None
    return None


def find_reasoning_span(output: str, delimiters: tuple[str, str]) -> tuple[int, int] | None:
    """(start, end) offsets of the delimited reasoning segment, where end
    points just past the LAST closing tag; None when no closing tag."""
    open_tag, close_tag = delimiters
    close_pos = output.rfind(close_tag)
    if close_pos < 0:
        return None
    open_pos = output.find(open_tag)
    start = open_pos if 0 <= open_pos < close_pos else 0
    return (start, close_pos + len(close_tag))


def extract_choice(
    output: str,
    n_options: int,
    delimiters: tuple[str, str] = DEFAULT_REASONING_DELIMITERS,
    arabic_letters: bool = True,
) -> int | None:
    """Pull the selected option index out of model text; None means Invalid.

    Only text after the last closing reasoning delimiter is searched (the
    whole output when there is none). Rule 1: an explicit answer pattern,
    last occurrence wins. Rule 2: the last standalone in-range option
    letter, Latin uppercase or Arabic.
    """
    if n_options < 2:
        raise ValueError("n_options must be >= 2")
    span = find_reasoning_span(output, delimiters)
    tail = output[span[1]:] if span else output

    for pattern in _ANSWER_PATTERNS:
        best = None
        for m in re.finditer(pattern, tail, re.IGNORECASE):
            idx = _letter_to_index(m.group(1).strip("ـ"), n_options, arabic_letters)
            if idx is not None:
                best = idx
        if best is not None:
            return best

    best = None
    for m in re.finditer(r"(?<![\wء-ي])([A-Zء-ي])(?![\wء-ي])", tail):
        idx = _letter_to_index(m.group(1), n_options, arabic_letters)
        if idx is not None:
            best = idx
    return best


def score_parsed(
    item: BenchmarkItem,
    output: str,
    delimiters: tuple[str, str] = DEFAULT_REASONING_DELIMITERS,
    arabic_letters: bool = True,
) -> ItemResult:
    """Score an already-generated reasoning output by extraction."""
    predicted = extract_choice(output, len(item.options), delimiters, arabic_letters)
    return ItemResult(
        task_id=item.task_id,
        mode=ScoringMode.PARSE_AFTER_REASONING,
        predicted=predicted,
        gold=item.gold_index,
        outcome=_outcome(predicted, item.gold_index),
        raw_output=output,
        reasoning_span=find_reasoning_span(output, delimiters),
        error=None if predicted is not None else "no option letter found in output",
    )
