"""Teacher prompt rendering and multiple-choice reformulation."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..types import BenchmarkItem
from .traces import DEFAULT_TRACE_FORMAT, TraceFormat, option_letter


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class PromptTemplate:
    """A teacher prompt body with {question} and {options} slots.

    The rendered prompt must carry all four phase headers verbatim so the
    teacher's output segments deterministically; rendering fails fast if
    the template drops one.
    """

    body: str
    fmt: TraceFormat = DEFAULT_TRACE_FORMAT

    def required_slots(self) -> list[str]:
        return ["{question}", "{options}", *self.fmt.headers().values()]


DEFAULT_TEACHER_TEMPLATE = PromptTemplate(
    body=(
        "You are writing a model reasoning trace for an Arabic multiple-choice question.\n"
        "Work through the question in four sections, using these exact headers in this order.\n"
        "\n"
        "### Analysis / التحليل\n"
        "Identify the core issue and the applicable rule or principle. When the question\n"
        "turns on a cultural, ethical, or legal norm, name that principle explicitly.\n"
        "\n"
        "### Elimination / الاستبعاد\n"
        "Rule out each tempting but wrong option as a bullet '- <LETTER>: <why it fails>'.\n"
        "\n"
        "### Linguistic Check / التدقيق اللغوي\n"
        "Verify that the chosen answer respects Arabic grammar and style, and say why.\n"
        "\n"
        "### Synthesis / الخلاصة\n"
        "State the conclusion concisely and finish with a line 'Answer: <LETTER>'.\n"
        "\n"
        "Question:\n{question}\n\nOptions:\n{options}\n"
    )
)


def render_options(item: BenchmarkItem) -> str:
    return "\n".join(f"{option_letter(i)}. {opt}" for i, opt in enumerate(item.options))


def render_teacher_prompt(item: BenchmarkItem, template: PromptTemplate = DEFAULT_TEACHER_TEMPLATE) -> str:
    """Fill the template; deterministic for a fixed (item, template)."""
    for slot in template.required_slots():
        if slot not in template.body:
            raise TemplateError(f"template missing required slot {slot!r}")
    prompt = template.body.replace("{question}", item.question)
    prompt = prompt.replace("{options}", render_options(item))
    if item.context:
        prompt = f"Context:\n{item.context}\n\n{prompt}"
    return prompt


class PairKind(str, Enum):
    INSTRUCTION_RESPONSE = "InstructionResponse"
    OPEN_COMPLETION = "OpenCompletion"
    MC_REFORMULATION = "McReformulation"


class ReformulationStyle(str, Enum):
    #: instruction asks for the answer outright
    DIRECT = "direct"
    #: instruction ends mid-sentence, response completes it
    COMPLETION = "completion"


@dataclass(frozen=True)
class InstructionPair:
    instruction: str
    response: str
    kind: PairKind

    def __post_init__(self):
        if not self.instruction or not self.response:
            raise ValueError("instruction and response must be non-empty")

    def to_obj(self) -> dict:
        return {"instruction": self.instruction, "response": self.response,
                "kind": self.kind.value}


def reformulate_mc(
    item: BenchmarkItem, style: ReformulationStyle = ReformulationStyle.DIRECT
) -> InstructionPair:
    """Deterministic instruction pair naming the gold letter and its text."""
    letter = option_letter(item.gold_index)
    gold_text = item.options[item.gold_index]
    options = render_options(item)
    if style is ReformulationStyle.DIRECT:
        return InstructionPair(
            instruction=(
                f"{item.question}\n\n{options}\n\n"
                "Choose the correct option and answer with its letter."
            ),
            response=f"Answer: {letter}. {gold_text}",
            kind=PairKind.MC_REFORMULATION,
        )
    return InstructionPair(
        instruction=f"{item.question}\n\n{options}\n\nThe correct option is",
        response=f"{letter}. {gold_text}",
        kind=PairKind.OPEN_COMPLETION,
    )
