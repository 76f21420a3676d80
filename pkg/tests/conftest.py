from __future__ import annotations

import random
from pathlib import Path

import pytest

from mazij.types import BenchmarkItem, Category, Dialect, Document, Language, Suite

_acceptance_outcomes: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        _acceptance_outcomes.append((name, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for name, outcome in _acceptance_outcomes:
        terminalreporter.write_line(f"  [{outcome}] {name}")

REPO_ROOT = Path(__file__).resolve().parents[1]
PUBLISHED_SCORES = REPO_ROOT / "data" / "published_oall_scores.json"

ARABIC_WORDS = (
    "كتاب مدرسة قلم شمس قمر بحر جبل نهر مدينة قرية طفل معلم سؤال جواب "
    "علم لغة نحو صرف بيت شجرة طريق سوق خبز ماء سماء أرض نجم ليل نهار صباح "
    "تاريخ جغرافيا حساب هندسة قصة شعر نثر خبر رأي حكم عدل صدق أمانة عمل"
).split()
ENGLISH_WORDS = (
    "book school pen sun moon sea mountain river city village child teacher "
    "question answer science language grammar house tree road market bread "
    "water sky earth star night day morning history geography story poem sept"
).split()


def random_sentence(rng: random.Random, words, n: int) -> str:
    return " ".join(rng.choice(words) for _ in range(n))


def make_document(
    rng: random.Random,
    doc_id: str,
    language: Language = Language.ARABIC,
    category: Category = Category.LITERATURE,
    n_tokens: int = 60,
    text: str | None = None,
) -> Document:
    words = ARABIC_WORDS if language is Language.ARABIC else ENGLISH_WORDS
    if text is None:
        text = random_sentence(rng, words, n_tokens)
    return Document.create(
        id=doc_id,
        text=text,
        language=language,
        category=category,
        source="synthetic",
        dialect=Dialect.MSA if language is Language.ARABIC else None,
    )


def make_item(
    rng: random.Random,
    task_id: str,
    suite: Suite = Suite.ARABIC_MMLU,
    n_options: int = 4,
    question_tokens: int = 20,
) -> BenchmarkItem:
    question = random_sentence(rng, ARABIC_WORDS, question_tokens) + f" {task_id}"
    options = [
        random_sentence(rng, ARABIC_WORDS, 3) + f" خيار{i}" for i in range(n_options)
    ]
    return BenchmarkItem(
        suite=suite,
        task_id=task_id,
        question=question,
        options=options,
        gold_index=rng.randrange(n_options),
    )


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20_240_817)


def brute_force_jaccard(text_a: str, text_b: str, width: int = 5) -> float:
    """Independent oracle: shingle-set Jaccard straight from definitions."""
    from mazij.normalize import canonicalize

    def shingle_set(text: str) -> set:
        canon = canonicalize(text)
        if not canon:
            return set()
        if len(canon) < width:
            return {canon}
        return {canon[i:i + width] for i in range(len(canon) - width + 1)}

    a, b = shingle_set(text_a), shingle_set(text_b)
    if not a and not b:
        return 0.0
    return len(a & b) / len(a | b)
