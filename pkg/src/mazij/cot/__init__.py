from .batch import (
    DecodingParams,
    HttpChatClient,
    JsonlSink,
    RetryPolicy,
    TeacherRequest,
    TeacherResponse,
    run_batch,
)
from .prompts import (
    DEFAULT_TEACHER_TEMPLATE,
    InstructionPair,
    PairKind,
    PromptTemplate,
    ReformulationStyle,
    TemplateError,
    reformulate_mc,
    render_teacher_prompt,
)
from .stratify import complexity_score, stratify
from .traces import (
    DEFAULT_TRACE_FORMAT,
    CoTTrace,
    TraceFormat,
    TraceRecord,
    TraceViolation,
    ValidationReport,
    Violation,
    make_record,
    option_letter,
    parse_trace,
    serialize_trace,
    validate_trace,
    write_trace_store,
)

__all__ = [
    "CoTTrace",
    "DEFAULT_TEACHER_TEMPLATE",
    "DEFAULT_TRACE_FORMAT",
    "DecodingParams",
    "HttpChatClient",
    "InstructionPair",
    "JsonlSink",
    "PairKind",
    "PromptTemplate",
    "ReformulationStyle",
    "RetryPolicy",
    "TeacherRequest",
    "TeacherResponse",
    "TemplateError",
    "TraceFormat",
    "TraceRecord",
    "TraceViolation",
    "ValidationReport",
    "Violation",
    "complexity_score",
    "make_record",
    "option_letter",
    "parse_trace",
    "reformulate_mc",
    "render_teacher_prompt",
    "run_batch",
    "serialize_trace",
    "stratify",
    "validate_trace",
    "write_trace_store",
]
