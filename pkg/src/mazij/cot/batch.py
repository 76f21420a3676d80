"""Batch generation against a chat-completion-style teacher endpoint.

The transport is pluggable: anything with ``complete(request) -> str``
works, including in-process stubs. Failures retry with exponential
backoff and are surfaced per item; one bad request never aborts a batch.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol

import httpx

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecodingParams:
    model: str = "teacher"
    temperature: float = 0.0
    max_output_tokens: int = 2048


@dataclass(frozen=True)
class TeacherRequest:
    item_id: str
    prompt: str
    params: DecodingParams = field(default_factory=DecodingParams)


@dataclass
class TeacherResponse:
    item_id: str
    text: str
    status: str  # "ok" | "error"
    error: str | None = None
    attempts: int = 1

    def to_obj(self) -> dict:
        return {"item_id": self.item_id, "text": self.text, "status": self.status,
                "error": self.error, "attempts": self.attempts}


class TeacherEndpoint(Protocol):
    def complete(self, request: TeacherRequest) -> str: ...


class EndpointAuthError(Exception):
    """Credentials missing or rejected; not retryable."""


class HttpChatClient:
    """Minimal JSON contract: POST {model, messages, temperature,
    max_output_tokens} -> {text, finish_status}.

    Credentials come from the environment variable named in config and go
    out as a bearer token.
    """

    def __init__(
        self,
        url: str,
        api_key_env: str | None = None,
        timeout: float = 120.0,
        transport: httpx.BaseTransport | None = None,
    ):
        self.url = url
        self.api_key_env = api_key_env
        headers = {}
        if api_key_env:
            key = os.environ.get(api_key_env)
            if not key:
                raise EndpointAuthError(f"environment variable {api_key_env} is not set")
            headers["Authorization"] = f"Bearer {key}"
        self._client = httpx.Client(headers=headers, timeout=timeout, transport=transport)

    def complete(self, request: TeacherRequest) -> str:
        payload = {
            "model": request.params.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.params.temperature,
            "max_output_tokens": request.params.max_output_tokens,
        }
        resp = self._client.post(self.url, json=payload)
        if resp.status_code in (401, 403):
            raise EndpointAuthError(f"endpoint rejected credentials: HTTP {resp.status_code}")
        resp.raise_for_status()
        body = resp.json()
        if body.get("finish_status") not in (None, "ok", "stop", "complete"):
            raise RuntimeError(f"teacher finished abnormally: {body.get('finish_status')}")
        return body["text"]

    def close(self) -> None:
        self._client.close()


@dataclass(frozen=True)
class RetryPolicy:
    max_in_flight: int = 4
    retries: int = 3
    backoff_base: float = 0.5
    backoff_factor: float = 2.0

    def delays(self):
        delay = self.backoff_base
        for _ in range(self.retries):
            yield delay
            delay *= self.backoff_factor


def run_batch(
    requests: list[TeacherRequest],
    client: TeacherEndpoint,
    policy: RetryPolicy = RetryPolicy(),
    *,
    sink: Callable[[TeacherResponse], None] | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> list[TeacherResponse]:
    """One response per request, in request order.

    ``sink`` receives each response as it completes (append-only raw
    persistence happens there, before any validation). Auth errors are
    not retried; transport errors retry per policy and end in an error
    response rather than an exception.
    """
    if not requests:
        return []
    results: list[TeacherResponse | None] = [None] * len(requests)
    sink_lock = threading.Lock()

    def work(pos: int) -> None:
        request = requests[pos]
        attempts = 0
        last_error = None
        for delay in [0.0, *policy.delays()]:
            if delay:
                sleep(delay)
            attempts += 1
            try:
                text = client.complete(request)
                results[pos] = TeacherResponse(
                    item_id=request.item_id, text=text, status="ok", attempts=attempts
                )
                break
            except EndpointAuthError:
                raise
            except Exception as exc:  # transport/endpoint failure: retryable
                last_error = str(exc)
                logger.warning("teacher request %s attempt %d failed: %s",
                               request.item_id, attempts, exc)
        if results[pos] is None:
            results[pos] = TeacherResponse(
                item_id=request.item_id, text="", status="error",
                error=last_error, attempts=attempts,
            )
        if sink is not None:
            with sink_lock:
                sink(results[pos])

    with ThreadPoolExecutor(max_workers=policy.max_in_flight) as pool:
        futures = [pool.submit(work, pos) for pos in range(len(requests))]
        for fut in futures:
            fut.result()

    return results  # type: ignore[return-value]


class JsonlSink:
    """Append-only raw-response persistence, ordered by completion."""

    def __init__(self, path: str | Path):
        self._fh = Path(path).open("a", encoding="utf-8")

    def __call__(self, response: TeacherResponse) -> None:
        self._fh.write(json.dumps(response.to_obj(), ensure_ascii=False) + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "JsonlSink":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
