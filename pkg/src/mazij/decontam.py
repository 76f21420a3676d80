"""Benchmark-overlap detection: exact n-gram collisions, fuzzy
MinHash/Jaccard matching, and a pluggable classifier hook.

Verdict precedence is ExactHit > FuzzyHit > ClassifierHit > Clean, chosen
so contamination always errs toward removal. A FuzzyHit requires both LSH
candidacy and a verified estimated Jaccard at or above the threshold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Protocol

import numpy as np

from .normalize import DEFAULT_SHINGLE_WIDTH, NORMALIZATION_VERSION, normalize
from .sketch import LshIndex, LshParams, MinHasher, estimated_jaccard, stable_hash64
from .types import BenchmarkItem, Document

INDEX_FORMAT_VERSION = 1


class Verdict(str, Enum):
    CLEAN = "Clean"
    EXACT_HIT = "ExactHit"
    FUZZY_HIT = "FuzzyHit"
    CLASSIFIER_HIT = "ClassifierHit"


@dataclass(frozen=True)
class IndexParams:
    """Knobs for the contamination index; defaults follow common
    decontamination practice and are recorded in every manifest."""

    ngram_size: int = 13
    shingle_width: int = DEFAULT_SHINGLE_WIDTH
    lsh: LshParams = field(default_factory=LshParams)
    fuzzy_threshold: float = 0.8

    def __post_init__(self):
        if self.ngram_size < 2:
            raise ValueError(f"ngram_size must be >= 2, got {self.ngram_size}")
        if not 0 < self.fuzzy_threshold <= 1:
            raise ValueError(f"fuzzy_threshold must be in (0, 1], got {self.fuzzy_threshold}")

    def to_obj(self) -> dict:
        return {
            "ngram_size": self.ngram_size,
            "shingle_width": self.shingle_width,
            "num_perm": self.lsh.num_perm,
            "bands": self.lsh.bands,
            "rows": self.lsh.rows,
            "fuzzy_threshold": self.fuzzy_threshold,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "IndexParams":
        return cls(
            ngram_size=obj["ngram_size"],
            shingle_width=obj["shingle_width"],
            lsh=LshParams(num_perm=obj["num_perm"], bands=obj["bands"], rows=obj["rows"]),
            fuzzy_threshold=obj["fuzzy_threshold"],
        )


class ClassifierHook(Protocol):
    """Scores (document canonical, item canonical) similarity in [0, 1]."""

    threshold: float

    def score(self, doc_canonical: str, item_canonical: str) -> float: ...


class ContainmentHook:
    """Reference hook: fraction of the item's shingles found in the doc."""

    def __init__(self, threshold: float = 0.5, shingle_width: int = DEFAULT_SHINGLE_WIDTH):
        self.threshold = threshold
        self.shingle_width = shingle_width

    def score(self, doc_canonical: str, item_canonical: str) -> float:
        item_shingles = set(normalize(item_canonical, self.shingle_width).shingles)
        if not item_shingles:
            return 0.0
        doc_shingles = set(normalize(doc_canonical, self.shingle_width).shingles)
        return len(item_shingles & doc_shingles) / len(item_shingles)


def _token_ngrams(tokens: list[str], n: int) -> Iterator[str]:
    for i in range(len(tokens) - n + 1):
        yield " ".join(tokens[i:i + n])


@dataclass
class _IndexedItem:
    suite: str
    task_id: str
    canonical: str
    signature: np.ndarray


class ContaminationIndex:
    """Immutable-after-build index over a benchmark suite."""

    def __init__(self, params: IndexParams, seed: int):
        self.params = params
        self.seed = seed
        self.normalization_version = NORMALIZATION_VERSION
        self.exact_ngrams: set[int] = set()
        self.items: list[_IndexedItem] = []
        self._lsh = LshIndex(params.lsh)
        self._hasher = MinHasher(num_perm=params.lsh.num_perm, seed=seed)

    def _add_item(self, suite: str, task_id: str, text: str) -> None:
        norm = normalize(text, self.params.shingle_width)
        tokens = norm.canonical.split()
        for ngram in _token_ngrams(tokens, self.params.ngram_size):
            self.exact_ngrams.add(stable_hash64(ngram))
        sig = self._hasher.signature(set(norm.shingles))
        item_pos = len(self.items)
        self.items.append(
            _IndexedItem(suite=suite, task_id=task_id, canonical=norm.canonical, signature=sig)
        )
        self._lsh.add(item_pos, sig)


def build_index(
    items: list[BenchmarkItem], params: IndexParams | None = None, seed: int = 0
) -> ContaminationIndex:
    """Index each item's question+options text for exact and fuzzy lookup."""
    if not items:
        raise ValueError("cannot build a contamination index from zero items")
    index = ContaminationIndex(params or IndexParams(), seed)
    for item in items:
        index._add_item(item.suite.value, item.task_id, item.benchmark_text())
    return index


@dataclass
class ContaminationReport:
    doc_id: str
    verdict: Verdict
    matched_suite: str | None = None
    matched_task_id: str | None = None
    similarity: float | None = None
    evidence: str | None = None

    def __post_init__(self):
        clean = self.verdict is Verdict.CLEAN
        if clean != (self.matched_suite is None):
            raise ValueError("verdict Clean iff matched item absent")

    def to_obj(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "verdict": self.verdict.value,
            "matched_suite": self.matched_suite,
            "matched_task_id": self.matched_task_id,
            "similarity": self.similarity,
        }


def check(
    doc: Document,
    index: ContaminationIndex,
    hook: ClassifierHook | None = None,
    *,
    hook_scope: str = "candidates",
) -> ContaminationReport:
    """Classify one document against the index.

    The classifier hook, when given, is consulted only after exact and
    fuzzy checks miss; by default it sees the LSH candidate items
    (``hook_scope="all"`` scores every indexed item instead).
    """
    if index.normalization_version != NORMALIZATION_VERSION:
        raise ValueError(
            f"index built under normalization {index.normalization_version!r}, "
            f"runtime is {NORMALIZATION_VERSION!r}"
        )
    norm = normalize(doc.text, index.params.shingle_width)
    tokens = norm.canonical.split()

    for ngram in _token_ngrams(tokens, index.params.ngram_size):
        if stable_hash64(ngram) in index.exact_ngrams:
            suite, task_id = _locate_ngram(index, ngram)
            return ContaminationReport(
                doc_id=doc.id,
                verdict=Verdict.EXACT_HIT,
                matched_suite=suite,
                matched_task_id=task_id,
                evidence=ngram,
            )

    sig = index._hasher.signature(set(norm.shingles))
    candidates = index._lsh.candidates(sig)
    best_pos, best_sim = None, -1.0
    for pos in candidates:
        sim = estimated_jaccard(sig, index.items[pos].signature)
        if sim > best_sim:
            best_pos, best_sim = pos, sim
    if best_pos is not None and best_sim >= index.params.fuzzy_threshold:
        hit = index.items[best_pos]
        return ContaminationReport(
            doc_id=doc.id,
            verdict=Verdict.FUZZY_HIT,
            matched_suite=hit.suite,
            matched_task_id=hit.task_id,
            similarity=best_sim,
            evidence=f"lsh-candidate:{best_pos}",
        )

    if hook is not None:
        scope = range(len(index.items)) if hook_scope == "all" else candidates
        for pos in scope:
            item = index.items[pos]
            score = hook.score(norm.canonical, item.canonical)
            if score >= hook.threshold:
                return ContaminationReport(
                    doc_id=doc.id,
                    verdict=Verdict.CLASSIFIER_HIT,
                    matched_suite=item.suite,
                    matched_task_id=item.task_id,
                    similarity=score,
                )

    return ContaminationReport(doc_id=doc.id, verdict=Verdict.CLEAN)


def _locate_ngram(index: ContaminationIndex, ngram: str) -> tuple[str, str]:
    """Find which indexed item contains a matched n-gram (for evidence)."""
    needle = f" {ngram} "
    for item in index.items:
        if needle in f" {item.canonical} ":
            return item.suite, item.task_id
    return "?", "?"


def filter_corpus(
    docs: Iterable[Document],
    index: ContaminationIndex,
    hook: ClassifierHook | None = None,
    *,
    hook_scope: str = "candidates",
) -> tuple[list[Document], list[ContaminationReport]]:
    """Split a corpus into retained (Clean) docs and removal reports.

    Retained order matches input order; every removed doc gets a report.
    """
    retained: list[Document] = []
    reports: list[ContaminationReport] = []
    for doc in docs:
        report = check(doc, index, hook, hook_scope=hook_scope)
        if report.verdict is Verdict.CLEAN:
            retained.append(doc)
        else:
            reports.append(report)
    return retained, reports


def write_reports(path: str | Path, reports: Iterable[ContaminationReport]) -> int:
    n = 0
    with Path(path).open("w", encoding="utf-8") as fh:
        for report in reports:
            fh.write(json.dumps(report.to_obj(), ensure_ascii=False) + "\n")
            n += 1
    return n


def save_index(index: ContaminationIndex, path: str | Path) -> None:
    """Persist the index as versioned JSON with embedded parameters."""
    obj = {
        "format_version": INDEX_FORMAT_VERSION,
        "normalization_version": index.normalization_version,
        "seed": index.seed,
        "params": index.params.to_obj(),
        "exact_ngrams": sorted(index.exact_ngrams),
        "items": [
            {
                "suite": it.suite,
                "task_id": it.task_id,
                "canonical": it.canonical,
                "signature": it.signature.tolist(),
            }
            for it in index.items
        ],
    }
    Path(path).write_text(json.dumps(obj, ensure_ascii=False), encoding="utf-8")


def load_index(path: str | Path) -> ContaminationIndex:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    if obj.get("format_version") != INDEX_FORMAT_VERSION:
        raise ValueError(f"unsupported index format version {obj.get('format_version')!r}")
    index = ContaminationIndex(IndexParams.from_obj(obj["params"]), obj["seed"])
    index.normalization_version = obj["normalization_version"]
    index.exact_ngrams = set(obj["exact_ngrams"])
    for it in obj["items"]:
        sig = np.array(it["signature"], dtype=np.uint64)
        pos = len(index.items)
        index.items.append(
            _IndexedItem(
                suite=it["suite"], task_id=it["task_id"],
                canonical=it["canonical"], signature=sig,
            )
        )
        index._lsh.add(pos, sig)
    return index
