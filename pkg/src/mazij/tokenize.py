"""Token counting behind a pluggable tokenizer handle.

Every token budget in the pipeline is interpreted under the configured
tokenizer, so the handle carries a name that manifests record for
provenance. The default is a model-agnostic approximation: split on
whitespace, count each punctuation mark as its own token.
"""

from __future__ import annotations

import re
from typing import Protocol


class TokenizerHandle(Protocol):
    """Anything with a stable name and a deterministic token count."""

    name: str

    def count_tokens(self, text: str) -> int: ...


_TOKEN = re.compile(r"\w+|[^\w\s]", re.UNICODE)


class WhitespacePunctTokenizer:
    """Whitespace-separated words; each punctuation mark is one token."""

    name = "whitespace-punct-1"

    def tokenize(self, text: str) -> list[str]:
        return _TOKEN.findall(text)

    def count_tokens(self, text: str) -> int:
        return len(_TOKEN.findall(text))


DEFAULT_TOKENIZER = WhitespacePunctTokenizer()


def count_tokens(text: str, tokenizer: TokenizerHandle = DEFAULT_TOKENIZER) -> int:
    """Count of ``text`` under ``tokenizer`` (default: whitespace+punct)."""
    return tokenizer.count_tokens(text)
