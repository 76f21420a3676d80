"""Deterministic assembly of a token-budgeted bilingual supervision mix.

Each category budget is split by the language ratio into (category,
language) cells; cells are filled by seeded-shuffle greedy selection.
Shortfalls are reported, never silently rebalanced, and an independent
audit recomputes every achieved total from the pool.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from ._version import __version__
from .types import Category, Document, Language

#: Published supervision-set budgets, in tokens.
DEFAULT_TOTAL_BUDGET = 372_000_000
DEFAULT_CATEGORY_BUDGETS = {
    Category.LITERATURE: 103_200_000,
    Category.STEM: 90_000_000,
    Category.CREATIVE: 70_000_000,
    Category.REVIEWS: 60_200_000,
    Category.LEGAL: 40_000_000,
    Category.SOCIAL: 8_600_000,
}
DEFAULT_LANGUAGE_RATIO = {Language.ARABIC: 0.80, Language.ENGLISH: 0.20}

#: Acceptable drift of the achieved Arabic token share around its target.
ARABIC_SHARE_TOLERANCE = 0.02


@dataclass
class MixtureSpec:
    total_budget: int = DEFAULT_TOTAL_BUDGET
    language_ratio: dict[Language, float] = field(
        default_factory=lambda: dict(DEFAULT_LANGUAGE_RATIO)
    )
    category_budgets: dict[Category, int] = field(
        default_factory=lambda: dict(DEFAULT_CATEGORY_BUDGETS)
    )
    seed: int = 0
    tolerance: int | None = None  # None: max single-document token count in pool

    def to_obj(self) -> dict:
        return {
            "total_budget": self.total_budget,
            "language_ratio": {k.value: v for k, v in self.language_ratio.items()},
            "category_budgets": {k.value: v for k, v in self.category_budgets.items()},
            "seed": self.seed,
            "tolerance": self.tolerance,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "MixtureSpec":
        return cls(
            total_budget=obj.get("total_budget", DEFAULT_TOTAL_BUDGET),
            language_ratio={Language(k): v for k, v in obj["language_ratio"].items()}
            if "language_ratio" in obj else dict(DEFAULT_LANGUAGE_RATIO),
            category_budgets={Category(k): v for k, v in obj["category_budgets"].items()}
            if "category_budgets" in obj else dict(DEFAULT_CATEGORY_BUDGETS),
            seed=obj.get("seed", 0),
            tolerance=obj.get("tolerance"),
        )

    def digest(self) -> str:
        payload = json.dumps(self.to_obj(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(payload).hexdigest()


def validate_spec(spec: MixtureSpec) -> list[str]:
    """Empty list when the spec is coherent, else one message per violation."""
    violations = []
    if spec.total_budget < 0:
        violations.append(f"total_budget is negative: {spec.total_budget}")
    for cat, budget in spec.category_budgets.items():
        if budget < 0:
            violations.append(f"category budget for {cat.value} is negative: {budget}")
    for lang, ratio in spec.language_ratio.items():
        if ratio < 0:
            violations.append(f"language ratio for {lang.value} is negative: {ratio}")
    budget_sum = sum(spec.category_budgets.values())
    if budget_sum != spec.total_budget:
        violations.append(
            f"budget sum != total: categories sum to {budget_sum}, total is {spec.total_budget}"
        )
    ratio_sum = sum(spec.language_ratio.values())
    if abs(ratio_sum - 1.0) > 1e-9:
        violations.append(f"ratio sum != 1.0: {ratio_sum}")
    if spec.tolerance is not None and spec.tolerance < 0:
        violations.append(f"tolerance is negative: {spec.tolerance}")
    return violations


@dataclass
class CellShortfall:
    category: str
    language: str
    target: int
    achieved: int

    def to_obj(self) -> dict:
        return {"category": self.category, "language": self.language,
                "target": self.target, "achieved": self.achieved}


@dataclass
class MixtureManifest:
    selected_doc_ids: list[str]
    achieved_tokens_per_category: dict[str, int]
    achieved_tokens_per_language: dict[str, int]
    seed: int
    spec_hash: str
    tool_version: str
    tolerance: int
    cell_targets: dict[str, int]
    cell_achieved: dict[str, int]
    shortfalls: list[CellShortfall]

    def to_obj(self) -> dict:
        body = {
            "selected_doc_ids": self.selected_doc_ids,
            "achieved_tokens_per_category": self.achieved_tokens_per_category,
            "achieved_tokens_per_language": self.achieved_tokens_per_language,
            "seed": self.seed,
            "spec_hash": self.spec_hash,
            "tool_version": self.tool_version,
            "tolerance": self.tolerance,
            "cell_targets": self.cell_targets,
            "cell_achieved": self.cell_achieved,
            "shortfalls": [s.to_obj() for s in self.shortfalls],
        }
        digest = hashlib.sha256(
            json.dumps(body, sort_keys=True, ensure_ascii=False).encode("utf-8")
        ).hexdigest()
        return {**body, "content_digest": digest}

    @classmethod
    def from_obj(cls, obj: dict) -> "MixtureManifest":
        return cls(
            selected_doc_ids=obj["selected_doc_ids"],
            achieved_tokens_per_category=obj["achieved_tokens_per_category"],
            achieved_tokens_per_language=obj["achieved_tokens_per_language"],
            seed=obj["seed"],
            spec_hash=obj["spec_hash"],
            tool_version=obj["tool_version"],
            tolerance=obj["tolerance"],
            cell_targets=obj["cell_targets"],
            cell_achieved=obj["cell_achieved"],
            shortfalls=[CellShortfall(**s) for s in obj["shortfalls"]],
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_obj(), indent=2, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )

    @classmethod
    def load(cls, path: str | Path) -> "MixtureManifest":
        return cls.from_obj(json.loads(Path(path).read_text(encoding="utf-8")))


def _cell_key(category: Category, language: Language) -> str:
    return f"{category.value}/{language.value}"


def _cell_rng_order(ids: list[int], seed: int, cell: str) -> list[int]:
    """Seeded shuffle of pool positions, stable across runs and platforms."""
    import random

    key = int.from_bytes(
        hashlib.blake2b(f"{seed}:{cell}".encode("utf-8"), digest_size=8).digest(), "big"
    )
    order = list(ids)
    random.Random(key).shuffle(order)
    return order


class MixtureError(ValueError):
    pass


def build_mixture(pool: list[Document], spec: MixtureSpec) -> MixtureManifest:
    """Greedy seeded-shuffle fill of every (category, language) cell.

    Selection within a cell stops once the target is met or the next pick
    would overshoot it by more than the tolerance. Deterministic for a
    fixed (pool, spec).
    """
    if not pool:
        raise MixtureError("document pool is empty")
    violations = validate_spec(spec)
    if violations:
        raise MixtureError("invalid mixture spec: " + "; ".join(violations))

    tolerance = spec.tolerance
    if tolerance is None:
        tolerance = max(doc.token_count for doc in pool)

    by_cell: dict[str, list[int]] = {}
    for pos, doc in enumerate(pool):
        by_cell.setdefault(_cell_key(doc.category, doc.language), []).append(pos)

    selected: list[str] = []
    per_category: dict[str, int] = {c.value: 0 for c in spec.category_budgets}
    per_language: dict[str, int] = {lang.value: 0 for lang in spec.language_ratio}
    cell_targets: dict[str, int] = {}
    cell_achieved: dict[str, int] = {}
    shortfalls: list[CellShortfall] = []

    for category in spec.category_budgets:
        for language, ratio in spec.language_ratio.items():
            cell = _cell_key(category, language)
            target = round(spec.category_budgets[category] * ratio)
            cell_targets[cell] = target
            achieved = 0
            for pos in _cell_rng_order(by_cell.get(cell, []), spec.seed, cell):
                if achieved >= target:
                    break
                tc = pool[pos].token_count
                if achieved + tc > target + tolerance:
                    break
                selected.append(pool[pos].id)
                achieved += tc
            cell_achieved[cell] = achieved
            per_category[category.value] += achieved
            per_language[language.value] += achieved
            if target - achieved > tolerance:
                shortfalls.append(
                    CellShortfall(category=category.value, language=language.value,
                                  target=target, achieved=achieved)
                )

    return MixtureManifest(
        selected_doc_ids=selected,
        achieved_tokens_per_category=per_category,
        achieved_tokens_per_language=per_language,
        seed=spec.seed,
        spec_hash=spec.digest(),
        tool_version=__version__,
        tolerance=tolerance,
        cell_targets=cell_targets,
        cell_achieved=cell_achieved,
        shortfalls=shortfalls,
    )


def audit_manifest(
    manifest: MixtureManifest, pool: list[Document], spec: MixtureSpec
) -> list[str]:
    """Independently recount every achieved total from the pool.

    Returns an empty list when the manifest is internally consistent and
    every sufficiently-supplied cell is within tolerance of its budget.
    """
    by_id = {doc.id: doc for doc in pool}
    violations = []

    unknown = [i for i in manifest.selected_doc_ids if i not in by_id]
    if unknown:
        raise MixtureError(f"manifest references ids absent from pool: {unknown[:5]}")
    if len(set(manifest.selected_doc_ids)) != len(manifest.selected_doc_ids):
        violations.append("selected_doc_ids contains duplicates")

    recount_cat: dict[str, int] = {c.value: 0 for c in spec.category_budgets}
    recount_lang: dict[str, int] = {lang.value: 0 for lang in spec.language_ratio}
    recount_cell: dict[str, int] = {}
    for doc_id in manifest.selected_doc_ids:
        doc = by_id[doc_id]
        recount_cat[doc.category.value] = recount_cat.get(doc.category.value, 0) + doc.token_count
        recount_lang[doc.language.value] = recount_lang.get(doc.language.value, 0) + doc.token_count
        cell = _cell_key(doc.category, doc.language)
        recount_cell[cell] = recount_cell.get(cell, 0) + doc.token_count

    if recount_cat != manifest.achieved_tokens_per_category:
        violations.append(
            f"per-category recount {recount_cat} != manifest {manifest.achieved_tokens_per_category}"
        )
    if recount_lang != manifest.achieved_tokens_per_language:
        violations.append(
            f"per-language recount {recount_lang} != manifest {manifest.achieved_tokens_per_language}"
        )

    reported_short = {(s.category, s.language) for s in manifest.shortfalls}
    for cell, target in manifest.cell_targets.items():
        achieved = recount_cell.get(cell, 0)
        category, language = cell.split("/")
        if abs(achieved - target) > manifest.tolerance and (category, language) not in reported_short:
            violations.append(
                f"cell {cell}: achieved {achieved} deviates from target {target} "
                f"beyond tolerance {manifest.tolerance} and is not a reported shortfall"
            )

    total = sum(recount_lang.values())
    if total and not manifest.shortfalls:
        arabic_share = recount_lang.get(Language.ARABIC.value, 0) / total
        target_share = spec.language_ratio.get(Language.ARABIC, 0.0)
        if abs(arabic_share - target_share) > ARABIC_SHARE_TOLERANCE:
            violations.append(
                f"Arabic share {arabic_share:.4f} outside "
                f"{target_share}±{ARABIC_SHARE_TOLERANCE}"
            )
    return violations
