"""JSONL ingestion and serialization for documents and benchmark items.

One JSON object per line. Malformed lines and invariant violations are
reported with their line number; whether they abort the stream or are
skipped is caller-configurable (abort by default: curation pipelines
should fail loudly).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Iterator

from .tokenize import DEFAULT_TOKENIZER, TokenizerHandle
from .types import (
    BenchmarkItem,
    Category,
    Dialect,
    Document,
    InvariantViolation,
    Language,
    Suite,
)

DOCUMENT_FIELDS = ("id", "text", "language", "dialect", "category", "source")
BENCHMARK_FIELDS = ("suite", "task_id", "question", "options", "gold_index", "context")


@dataclass(frozen=True)
class IngestDiagnostic:
    path: str
    line_no: int
    error: str

    def __str__(self) -> str:
        return f"{self.path}:{self.line_no}: {self.error}"


class IngestError(Exception):
    def __init__(self, diagnostic: IngestDiagnostic):
        self.diagnostic = diagnostic
        super().__init__(str(diagnostic))


def _parse_document(obj: dict, tokenizer: TokenizerHandle) -> Document:
    missing = [f for f in ("id", "text", "language", "category") if f not in obj]
    if missing:
        raise InvariantViolation(missing[0], "required field missing")
    try:
        language = Language(obj["language"])
    except ValueError:
        raise InvariantViolation("language", f"unknown language {obj['language']!r}")
    dialect = None
    if obj.get("dialect") is not None:
        try:
            dialect = Dialect(obj["dialect"])
        except ValueError:
            raise InvariantViolation("dialect", f"unknown dialect {obj['dialect']!r}")
    try:
        category = Category(obj["category"])
    except ValueError:
        raise InvariantViolation("category", f"unknown category {obj['category']!r}")
    extra = {k: v for k, v in obj.items() if k not in DOCUMENT_FIELDS}
    return Document.create(
        id=str(obj["id"]),
        text=obj["text"],
        language=language,
        category=category,
        source=obj.get("source", ""),
        dialect=dialect,
        tokenizer=tokenizer,
        extra=extra,
    )


def _parse_benchmark(obj: dict) -> BenchmarkItem:
    missing = [f for f in ("suite", "task_id", "question", "options", "gold_index") if f not in obj]
    if missing:
        raise InvariantViolation(missing[0], "required field missing")
    try:
        suite = Suite(obj["suite"])
    except ValueError:
        raise InvariantViolation("suite", f"unknown suite {obj['suite']!r}")
    if not isinstance(obj["options"], list):
        raise InvariantViolation("options", "must be a list")
    extra = {k: v for k, v in obj.items() if k not in BENCHMARK_FIELDS}
    return BenchmarkItem(
        suite=suite,
        task_id=str(obj["task_id"]),
        question=obj["question"],
        options=list(obj["options"]),
        gold_index=int(obj["gold_index"]),
        context=obj.get("context"),
        extra=extra,
    )


def ingest(
    path: str | Path,
    schema: str,
    *,
    on_error: str = "abort",
    tokenizer: TokenizerHandle = DEFAULT_TOKENIZER,
    diagnostics: list[IngestDiagnostic] | None = None,
    on_skip: Callable[[IngestDiagnostic], None] | None = None,
) -> Iterator[Document | BenchmarkItem]:
    """Stream validated records from a JSONL file.

    ``schema`` is ``"document"`` or ``"benchmark"``. Bad lines raise
    :class:`IngestError` when ``on_error="abort"``; with ``"skip"`` they are
    appended to ``diagnostics`` (and passed to ``on_skip`` if given) and the
    stream continues.
    """
    if schema not in ("document", "benchmark"):
        raise ValueError(f"unknown schema {schema!r}")
    if on_error not in ("abort", "skip"):
        raise ValueError(f"on_error must be 'abort' or 'skip', got {on_error!r}")
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                if not isinstance(obj, dict):
                    raise InvariantViolation("record", "line is not a JSON object")
                if schema == "document":
                    yield _parse_document(obj, tokenizer)
                else:
                    yield _parse_benchmark(obj)
            except (json.JSONDecodeError, InvariantViolation, TypeError, KeyError) as exc:
                diag = IngestDiagnostic(path=str(path), line_no=line_no, error=str(exc))
                if on_error == "abort":
                    raise IngestError(diag) from exc
                if diagnostics is not None:
                    diagnostics.append(diag)
                if on_skip is not None:
                    on_skip(diag)


def document_to_obj(doc: Document) -> dict:
    obj = {
        "id": doc.id,
        "text": doc.text,
        "language": doc.language.value,
        "dialect": doc.dialect.value if doc.dialect else None,
        "category": doc.category.value,
        "source": doc.source,
    }
    obj.update(doc.extra)
    return obj


def benchmark_to_obj(item: BenchmarkItem) -> dict:
    obj = {
        "suite": item.suite.value,
        "task_id": item.task_id,
        "question": item.question,
        "options": list(item.options),
        "gold_index": item.gold_index,
        "context": item.context,
    }
    obj.update(item.extra)
    return obj


def write_jsonl(path: str | Path, records: Iterable[Document | BenchmarkItem]) -> int:
    """Serialize records to JSONL; returns the number of lines written."""
    n = 0
    with Path(path).open("w", encoding="utf-8") as fh:
        for rec in records:
            obj = document_to_obj(rec) if isinstance(rec, Document) else benchmark_to_obj(rec)
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
            n += 1
    return n
