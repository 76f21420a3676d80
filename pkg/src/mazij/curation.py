"""Near-duplicate clustering and low-information / unsafe-content filtering
for the post-decontamination corpus."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable

from .normalize import DEFAULT_SHINGLE_WIDTH, normalize
from .sketch import LshIndex, LshParams, MinHasher, estimated_jaccard
from .types import Document


@dataclass
class DedupCluster:
    representative_id: str
    member_ids: list[str]
    pairwise_similarity_floor: float

    def __post_init__(self):
        if self.representative_id not in self.member_ids:
            raise ValueError("representative must be a cluster member")


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the earliest-ingested position as root
            if ra > rb:
                ra, rb = rb, ra
            self.parent[rb] = ra


def dedup(
    docs: list[Document],
    threshold: float = 0.8,
    seed: int = 0,
    *,
    lsh: LshParams | None = None,
    shingle_width: int = DEFAULT_SHINGLE_WIDTH,
) -> tuple[list[Document], list[DedupCluster]]:
    """Cluster near-duplicates (LSH candidacy + verified estimated Jaccard
    >= threshold) and keep the earliest-ingested member of each cluster.

    The kept list preserves input order; output is deterministic for a
    fixed seed regardless of how signature work might be parallelized.
    """
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    params = lsh or LshParams()
    hasher = MinHasher(num_perm=params.num_perm, seed=seed)
    index = LshIndex(params)

    signatures = []
    for pos, doc in enumerate(docs):
        sig = hasher.signature(set(normalize(doc.text, shingle_width).shingles))
        signatures.append(sig)
        index.add(pos, sig)

    uf = _UnionFind(len(docs))
    for pos, sig in enumerate(signatures):
        for other in index.candidates(sig):
            if other >= pos:
                continue
            if estimated_jaccard(sig, signatures[other]) >= threshold:
                uf.union(other, pos)

    groups: dict[int, list[int]] = {}
    for pos in range(len(docs)):
        groups.setdefault(uf.find(pos), []).append(pos)

    clusters = []
    dropped = set()
    for root in sorted(groups):
        members = groups[root]
        if len(members) < 2:
            continue
        clusters.append(
            DedupCluster(
                representative_id=docs[members[0]].id,
                member_ids=[docs[m].id for m in members],
                pairwise_similarity_floor=threshold,
            )
        )
        dropped.update(members[1:])

    kept = [doc for pos, doc in enumerate(docs) if pos not in dropped]
    return kept, clusters


def write_clusters(path: str | Path, clusters: Iterable[DedupCluster]) -> int:
    n = 0
    with Path(path).open("w", encoding="utf-8") as fh:
        for cluster in clusters:
            obj = {
                "representative_id": cluster.representative_id,
                "member_ids": cluster.member_ids,
            }
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
            n += 1
    return n


class QualityReason(str, Enum):
    TOO_SHORT = "TooShort"
    LOW_ENTROPY = "LowEntropy"
    BOILERPLATE_RATIO = "BoilerplateRatio"
    UNSAFE_CONTENT = "UnsafeContent"
    DUPLICATE = "Duplicate"


@dataclass
class QualityVerdict:
    doc_id: str
    kept: bool
    reasons: list[QualityReason]

    def __post_init__(self):
        if self.kept != (not self.reasons):
            raise ValueError("kept iff reasons empty")

    def to_obj(self) -> dict:
        return {"doc_id": self.doc_id, "kept": self.kept,
                "reasons": [r.value for r in self.reasons]}


class TermListSafetyHook:
    """Baseline unsafe-content check: any canonical term from the list
    appearing as a token in the canonical text flags the document."""

    def __init__(self, terms: Iterable[str]):
        self.terms = {normalize(t).canonical for t in terms if normalize(t).canonical}

    def __call__(self, doc: Document) -> bool:
        tokens = set(normalize(doc.text).canonical.split())
        return any(term in tokens for term in self.terms)


@dataclass
class QualityRules:
    """Filter thresholds. All invented defaults, all overridable; effective
    values land in the run manifest."""

    min_tokens: int = 16
    max_repeated_line_ratio: float = 0.3
    min_entropy_bits: float = 2.0
    unsafe_hook: Callable[[Document], bool] | None = None

    def to_obj(self) -> dict:
        return {
            "min_tokens": self.min_tokens,
            "max_repeated_line_ratio": self.max_repeated_line_ratio,
            "min_entropy_bits": self.min_entropy_bits,
            "unsafe_hook": getattr(self.unsafe_hook, "name", None)
            or (type(self.unsafe_hook).__name__ if self.unsafe_hook else None),
        }


def char_entropy(text: str) -> float:
    """Shannon entropy in bits/char over the character distribution."""
    if not text:
        return 0.0
    counts = Counter(text)
    total = len(text)
    return -sum((c / total) * math.log2(c / total) for c in counts.values())


def repeated_line_ratio(text: str) -> float:
    """1 - unique/total over non-empty stripped lines; 0 for < 2 lines."""
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if len(lines) < 2:
        return 0.0
    return 1.0 - len(set(lines)) / len(lines)


def quality_filter(doc: Document, rules: QualityRules | None = None) -> QualityVerdict:
    """Pure, order-independent verdict listing every violated rule."""
    rules = rules or QualityRules()
    reasons = []
    if doc.token_count < rules.min_tokens:
        reasons.append(QualityReason.TOO_SHORT)
    canonical = normalize(doc.text).canonical
    if char_entropy(canonical) < rules.min_entropy_bits:
        reasons.append(QualityReason.LOW_ENTROPY)
    if repeated_line_ratio(doc.text) > rules.max_repeated_line_ratio:
        reasons.append(QualityReason.BOILERPLATE_RATIO)
    if rules.unsafe_hook is not None and rules.unsafe_hook(doc):
        reasons.append(QualityReason.UNSAFE_CONTENT)
    return QualityVerdict(doc_id=doc.id, kept=not reasons, reasons=reasons)


def write_verdicts(path: str | Path, verdicts: Iterable[QualityVerdict]) -> int:
    n = 0
    with Path(path).open("w", encoding="utf-8") as fh:
        for verdict in verdicts:
            fh.write(json.dumps(verdict.to_obj(), ensure_ascii=False) + "\n")
            n += 1
    return n
