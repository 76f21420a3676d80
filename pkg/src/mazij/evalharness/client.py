"""Model endpoint contracts for the two scoring modes, plus stub clients
used for harness plumbing tests and dry runs."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Mapping, Protocol

import httpx


@dataclass(frozen=True)
class LogprobResult:
    logprob: float
    byte_length: int
    token_length: int


class ModelClient(Protocol):
    def complete(self, prompt: str) -> str: ...

    def logprob(self, prompt: str, continuation: str) -> LogprobResult: ...


class EndpointError(Exception):
    pass


class HttpModelClient:
    """HTTP JSON contract mirroring the teacher client, plus a logprob
    route: POST {prompt, continuation} -> {logprob, byte_length,
    token_length}."""

    def __init__(
        self,
        completion_url: str,
        logprob_url: str | None = None,
        model: str = "",
        api_key_env: str | None = None,
        temperature: float = 0.0,
        max_output_tokens: int = 4096,
        timeout: float = 300.0,
        transport: httpx.BaseTransport | None = None,
    ):
        self.completion_url = completion_url
        self.logprob_url = logprob_url
        self.model = model
        self.temperature = temperature
        self.max_output_tokens = max_output_tokens
        headers = {}
        if api_key_env:
            key = os.environ.get(api_key_env)
            if not key:
                raise EndpointError(f"environment variable {api_key_env} is not set")
            headers["Authorization"] = f"Bearer {key}"
        self._client = httpx.Client(headers=headers, timeout=timeout, transport=transport)

    def complete(self, prompt: str) -> str:
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.temperature,
            "max_output_tokens": self.max_output_tokens,
        }
        resp = self._client.post(self.completion_url, json=payload)
        resp.raise_for_status()
        return resp.json()["text"]

    def logprob(self, prompt: str, continuation: str) -> LogprobResult:
        if not self.logprob_url:
            raise EndpointError("no logprob endpoint configured")
        resp = self._client.post(
            self.logprob_url, json={"prompt": prompt, "continuation": continuation}
        )
        resp.raise_for_status()
        body = resp.json()
        return LogprobResult(
            logprob=body["logprob"],
            byte_length=body["byte_length"],
            token_length=body["token_length"],
        )

    def close(self) -> None:
        self._client.close()


class StubCompletionClient:
    """Deterministic completion stub: a fixed string or prompt -> text map
    or callable. The logprob route is unsupported by design."""

    def __init__(self, behavior: str | Mapping[str, str] | Callable[[str], str]):
        self._behavior = behavior

    def complete(self, prompt: str) -> str:
        if callable(self._behavior):
            return self._behavior(prompt)
        if isinstance(self._behavior, str):
            return self._behavior
        return self._behavior[prompt]

    def logprob(self, prompt: str, continuation: str) -> LogprobResult:
        raise EndpointError("stub completion client has no logprob interface")


class StubLogprobClient:
    """Logprob stub backed by a continuation -> (logprob, bytes, tokens)
    table; byte/token lengths default to the continuation's own."""

    def __init__(self, table: Mapping[str, float | tuple]):
        self._table = dict(table)

    def complete(self, prompt: str) -> str:
        raise EndpointError("stub logprob client has no completion interface")

    def logprob(self, prompt: str, continuation: str) -> LogprobResult:
        if continuation not in self._table:
            raise EndpointError(f"no stub logprob for {continuation!r}")
        entry = self._table[continuation]
        if isinstance(entry, tuple):
            lp, nbytes, ntokens = entry
            return LogprobResult(logprob=lp, byte_length=nbytes, token_length=ntokens)
        return LogprobResult(
            logprob=float(entry),
            byte_length=len(continuation.encode("utf-8")),
            token_length=max(1, len(continuation.split())),
        )
