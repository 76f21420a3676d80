from .aggregate import (
    DEFAULT_SUITE_SET,
    MarginTable,
    ReferenceScore,
    aggregate,
    compare,
    display,
    load_reference_scores,
    reference_rows,
)
from .client import (
    EndpointError,
    HttpModelClient,
    LogprobResult,
    ModelClient,
    StubCompletionClient,
    StubLogprobClient,
)
from .runner import (
    BenchmarkScore,
    DEFAULT_PROMPT_TEMPLATE,
    render_prompt,
    run_task,
    tally,
    write_results,
    write_summary,
)
from .scoring import (
    ARABIC_OPTION_LETTERS,
    DEFAULT_REASONING_DELIMITERS,
    ItemResult,
    Normalizer,
    Outcome,
    ScoringMode,
    extract_choice,
    find_reasoning_span,
    score_loglik,
    score_parsed,
)

__all__ = [
    "ARABIC_OPTION_LETTERS",
    "BenchmarkScore",
    "DEFAULT_PROMPT_TEMPLATE",
    "DEFAULT_REASONING_DELIMITERS",
    "DEFAULT_SUITE_SET",
    "EndpointError",
    "HttpModelClient",
    "ItemResult",
    "LogprobResult",
    "MarginTable",
    "ModelClient",
    "Normalizer",
    "Outcome",
    "ReferenceScore",
    "ScoringMode",
    "StubCompletionClient",
    "StubLogprobClient",
    "aggregate",
    "compare",
    "display",
    "extract_choice",
    "find_reasoning_span",
    "load_reference_scores",
    "reference_rows",
    "render_prompt",
    "run_task",
    "score_loglik",
    "score_parsed",
    "tally",
    "write_results",
    "write_summary",
]
