"""The four-phase reasoning-trace format: schema, serializer, parser,
and structural validator.

A trace walks through analysis, elimination, linguistic check, and
synthesis, in that order, and closes with an explicit lettered answer.
Header strings are configuration, not convention: they are recorded in
run manifests so trace stores parse back under the exact format that
produced them.
"""

from __future__ import annotations

import json
import re
import string
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable

PHASE_NAMES = ("analysis", "elimination", "linguistic_check", "synthesis")


@dataclass(frozen=True)
class TraceFormat:
    """Delimiters of the four phases plus the answer line prefix.

    Headers are bilingual by default so both Arabic- and English-leaning
    teachers segment unambiguously.
    """

    analysis_header: str = "### Analysis / التحليل"
    elimination_header: str = "### Elimination / الاستبعاد"
    linguistic_check_header: str = "### Linguistic Check / التدقيق اللغوي"
    synthesis_header: str = "### Synthesis / الخلاصة"
    answer_prefix: str = "Answer:"
    version: str = "four-phase-1"

    def headers(self) -> dict[str, str]:
        return {
            "analysis": self.analysis_header,
            "elimination": self.elimination_header,
            "linguistic_check": self.linguistic_check_header,
            "synthesis": self.synthesis_header,
        }


DEFAULT_TRACE_FORMAT = TraceFormat()


def option_letter(index: int) -> str:
    if not 0 <= index < 26:
        raise ValueError(f"option index {index} out of letter range")
    return string.ascii_uppercase[index]


def letter_index(letter: str) -> int:
    return string.ascii_uppercase.index(letter.upper())


@dataclass
class CoTTrace:
    """A parsed four-phase trace with its final answer.

    ``final_answer`` and elimination references are option indices;
    letters are a rendering concern.
    """

    analysis: str
    eliminations: list[tuple[int, str]]
    linguistic_check: str
    synthesis: str
    final_answer: int
    raw: str = ""


class TraceViolation(str, Enum):
    MISSING_PHASE = "MissingPhase"
    EMPTY_PHASE = "EmptyPhase"
    PHASE_ORDER = "PhaseOrder"
    BAD_OPTION_REF = "BadOptionRef"
    ANSWER_CONTRADICTS_ELIMINATION = "AnswerContradictsElimination"
    UNPARSEABLE_ANSWER = "UnparseableAnswer"


@dataclass(frozen=True)
class Violation:
    kind: TraceViolation
    detail: str = ""

    def to_obj(self) -> dict:
        return {"kind": self.kind.value, "detail": self.detail}


@dataclass
class ValidationReport:
    valid: bool
    violations: list[Violation]

    def __post_init__(self):
        if self.valid != (not self.violations):
            raise ValueError("valid iff violations empty")

    def kinds(self) -> set[TraceViolation]:
        return {v.kind for v in self.violations}


_ELIMINATION_BULLET = re.compile(r"^\s*[-*]\s*([A-Za-z])\s*[:.؛]\s*(.*)$")


def serialize_trace(trace: CoTTrace, fmt: TraceFormat = DEFAULT_TRACE_FORMAT) -> str:
    """Render a trace in the configured four-phase format.

    The output round-trips through :func:`parse_trace` as long as phase
    bodies do not themselves contain header lines.
    """
    lines = [fmt.analysis_header, trace.analysis.strip(), ""]
    lines.append(fmt.elimination_header)
    for idx, justification in trace.eliminations:
        lines.append(f"- {option_letter(idx)}: {justification.strip()}")
    lines.append("")
    lines += [fmt.linguistic_check_header, trace.linguistic_check.strip(), ""]
    lines += [
        fmt.synthesis_header,
        trace.synthesis.strip(),
        f"{fmt.answer_prefix} {option_letter(trace.final_answer)}",
    ]
    return "\n".join(lines)


def _split_phases(raw: str, fmt: TraceFormat) -> tuple[dict[str, str], list[Violation]]:
    """Segment raw text by the four headers; report missing/out-of-order."""
    violations = []
    positions = {}
    for name, header in fmt.headers().items():
        pos = raw.find(header)
        if pos < 0:
            violations.append(Violation(TraceViolation.MISSING_PHASE, name))
        else:
            positions[name] = pos

    present = sorted(positions, key=positions.get)
    expected = [n for n in PHASE_NAMES if n in positions]
    if present != expected:
        violations.append(
            Violation(TraceViolation.PHASE_ORDER, "headers out of order: " + " -> ".join(present))
        )

    bodies = {}
    ordered = sorted(positions.items(), key=lambda kv: kv[1])
    headers = fmt.headers()
    for i, (name, pos) in enumerate(ordered):
        start = pos + len(headers[name])
        end = ordered[i + 1][1] if i + 1 < len(ordered) else len(raw)
        bodies[name] = raw[start:end].strip()
    return bodies, violations


def parse_trace(
    raw: str,
    n_options: int,
    fmt: TraceFormat = DEFAULT_TRACE_FORMAT,
) -> CoTTrace | ValidationReport:
    """Parse one raw teacher output into a trace, or report every
    structural violation found (never just the first)."""
    if n_options < 2:
        raise ValueError("n_options must be >= 2")

    bodies, violations = _split_phases(raw, fmt)

    for name in PHASE_NAMES:
        if name in bodies and not bodies[name]:
            violations.append(Violation(TraceViolation.EMPTY_PHASE, name))

    eliminations: list[tuple[int, str]] = []
    seen_indices = set()
    for line in bodies.get("elimination", "").splitlines():
        m = _ELIMINATION_BULLET.match(line)
        if not m:
            continue
        letter, justification = m.group(1), m.group(2).strip()
        idx = letter_index(letter)
        if idx >= n_options:
            violations.append(
                Violation(TraceViolation.BAD_OPTION_REF, f"eliminated option {letter} out of range")
            )
            continue
        if idx in seen_indices:
            violations.append(
                Violation(TraceViolation.BAD_OPTION_REF, f"option {letter} eliminated twice")
            )
            continue
        seen_indices.add(idx)
        eliminations.append((idx, justification))

    final_answer = None
    synthesis = bodies.get("synthesis", "")
    answer_match = None
    for m in re.finditer(re.escape(fmt.answer_prefix) + r"\s*([A-Za-z])\b", synthesis):
        answer_match = m
    if answer_match is not None:
        idx = letter_index(answer_match.group(1))
        if idx >= n_options:
            violations.append(
                Violation(
                    TraceViolation.BAD_OPTION_REF,
                    f"final answer {answer_match.group(1)} out of range",
                )
            )
        else:
            final_answer = idx
            synthesis = synthesis[:answer_match.start()].rstrip()
    elif "synthesis" in bodies:
        violations.append(Violation(TraceViolation.UNPARSEABLE_ANSWER, "no answer line in synthesis"))

    if final_answer is not None and final_answer in seen_indices:
        violations.append(
            Violation(
                TraceViolation.ANSWER_CONTRADICTS_ELIMINATION,
                f"answer {option_letter(final_answer)} was eliminated",
            )
        )

    if violations:
        return ValidationReport(valid=False, violations=violations)

    return CoTTrace(
        analysis=bodies["analysis"],
        eliminations=eliminations,
        linguistic_check=bodies["linguistic_check"],
        synthesis=synthesis,
        final_answer=final_answer,
        raw=raw,
    )


def validate_trace(raw: str, n_options: int, fmt: TraceFormat = DEFAULT_TRACE_FORMAT) -> ValidationReport:
    """Validation-only view of :func:`parse_trace`."""
    result = parse_trace(raw, n_options, fmt)
    if isinstance(result, ValidationReport):
        return result
    return ValidationReport(valid=True, violations=[])


@dataclass
class TraceRecord:
    """One trace-store row: raw output plus its validation outcome."""

    item_id: str
    raw: str
    valid: bool
    violations: list[Violation]
    final_answer: int | None

    def to_obj(self) -> dict:
        return {
            "item_id": self.item_id,
            "raw": self.raw,
            "valid": self.valid,
            "violations": [v.to_obj() for v in self.violations],
            "final_answer": self.final_answer,
        }


def make_record(item_id: str, raw: str, n_options: int,
                fmt: TraceFormat = DEFAULT_TRACE_FORMAT) -> TraceRecord:
    result = parse_trace(raw, n_options, fmt)
    if isinstance(result, CoTTrace):
        return TraceRecord(item_id=item_id, raw=raw, valid=True,
                           violations=[], final_answer=result.final_answer)
    return TraceRecord(item_id=item_id, raw=raw, valid=False,
                       violations=result.violations, final_answer=None)


def write_trace_store(path: str | Path, records: Iterable[TraceRecord]) -> int:
    n = 0
    with Path(path).open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_obj(), ensure_ascii=False) + "\n")
            n += 1
    return n
