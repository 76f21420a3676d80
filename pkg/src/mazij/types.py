"""Core record types shared across the pipeline: corpus documents and
multiple-choice benchmark items, with their wire-format invariants."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .normalize import canonicalize
from .tokenize import DEFAULT_TOKENIZER, TokenizerHandle


class Language(str, Enum):
    ARABIC = "Arabic"
    ENGLISH = "English"
    OTHER = "Other"


class Dialect(str, Enum):
    MSA = "MSA"
    GULF = "Gulf"
    LEVANTINE = "Levantine"
    EGYPTIAN = "Egyptian"
    OTHER = "Other"


class Category(str, Enum):
    LITERATURE = "Literature"
    STEM = "Stem"
    CREATIVE = "Creative"
    REVIEWS = "Reviews"
    LEGAL = "Legal"
    SOCIAL = "Social"


class Suite(str, Enum):
    ARABIC_MMLU = "ArabicMMLU"
    MADINAH_QA = "MadinahQA"
    ARA_TRUST = "AraTrust"
    ARABIC_EXAMS = "ArabicEXAMS"
    ARB_MMLU_HT = "ArbMMLU_HT"
    ALRAGE = "ALRAGE"
    AL_GHAFA = "AlGhafa"


#: The seven leaderboard suites, in canonical reporting order.
ALL_SUITES: tuple[Suite, ...] = tuple(Suite)


class InvariantViolation(ValueError):
    """A record field breaks one of its declared invariants."""

    def __init__(self, field_name: str, message: str):
        self.field_name = field_name
        super().__init__(f"{field_name}: {message}")


@dataclass
class Document:
    """One corpus record.

    ``token_count`` is always the configured tokenizer's count of ``text``;
    it is recomputed at construction rather than trusted from input.
    ``extra`` holds unknown wire fields so round-trips preserve them.
    """

    id: str
    text: str
    language: Language
    category: Category
    source: str = ""
    dialect: Dialect | None = None
    token_count: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.id:
            raise InvariantViolation("id", "must be non-empty")
        if self.dialect is not None and self.language is not Language.ARABIC:
            raise InvariantViolation(
                "dialect", f"present but language is {self.language.value}, not Arabic"
            )
        if self.token_count < 0:
            raise InvariantViolation("token_count", "must be non-negative")

    @classmethod
    def create(
        cls,
        id: str,
        text: str,
        language: Language,
        category: Category,
        source: str = "",
        dialect: Dialect | None = None,
        tokenizer: TokenizerHandle = DEFAULT_TOKENIZER,
        extra: dict | None = None,
    ) -> "Document":
        return cls(
            id=id,
            text=text,
            language=language,
            category=category,
            source=source,
            dialect=dialect,
            token_count=tokenizer.count_tokens(text),
            extra=extra or {},
        )


@dataclass
class BenchmarkItem:
    """One evaluation question with lettered options and a gold index."""

    suite: Suite
    task_id: str
    question: str
    options: list[str]
    gold_index: int
    context: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.options) < 2:
            raise InvariantViolation("options", f"need >= 2 options, got {len(self.options)}")
        if not 0 <= self.gold_index < len(self.options):
            raise InvariantViolation(
                "gold_index",
                f"{self.gold_index} out of range for {len(self.options)} options",
            )
        canon = [canonicalize(opt) for opt in self.options]
        if len(set(canon)) != len(canon):
            raise InvariantViolation("options", "options not pairwise distinct after normalization")

    def benchmark_text(self) -> str:
        """Question concatenated with every option; the contamination
        surface for this item."""
        return " ".join([self.question, *self.options])
