"""Chat-completion access with interchangeable transports.

Three transports speak the same request/response shape: ``LiveTransport``
POSTs to a chat-completions endpoint (with retry, backoff, and optional
cassette recording), ``ReplayTransport`` replays a recorded cassette strictly
in order, and ``ScriptedTransport`` pops canned responses. Harness and prompt
code never know which one they are talking to.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from collections import deque
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Sequence

import requests

from .prompts import Message, validate_conversation

API_KEY_ENV = "GAMTALK_API_KEY"
_TRANSIENT_STATUS = (408, 409, 429, 500, 502, 503, 504)


class TransportError(RuntimeError):
    """A transport could not produce a response."""

    def __init__(self, message: str, attempts: int | None = None):
        super().__init__(message)
        self.attempts = attempts


class ReplayMismatchError(TransportError):
    """The next cassette record does not match the request being replayed."""


@dataclass(frozen=True)
class ChatParams:
    model_name: str
    temperature: float = 0.0
    max_output_tokens: int = 1024
    request_timeout: float = 60.0
    max_retries: int = 3

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


def request_digest(messages: Sequence[Message], params: ChatParams) -> str:
    """Stable digest over (messages, model_name, temperature).

    Everything cosmetic (timeouts, retry limits) is excluded so cassettes and
    cache entries survive configuration changes.
    """
    payload = {
        "messages": [{"role": m.role, "content": m.content} for m in messages],
        "model": params.model_name,
        "temperature": params.temperature,
    }
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def build_request_body(messages: Sequence[Message], params: ChatParams) -> dict:
    return {
        "model": params.model_name,
        "messages": [{"role": m.role, "content": m.content} for m in messages],
        "temperature": params.temperature,
        "max_tokens": params.max_output_tokens,
    }


def response_content(body: dict) -> str:
    try:
        return body["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError):
        raise TransportError(f"malformed chat-completion response: {body!r}") from None


def scripted_response_body(content: str, model_name: str = "scripted") -> dict:
    return {"model": model_name,
            "choices": [{"message": {"role": "assistant", "content": content},
                         "finish_reason": "stop"}]}


# -- cassettes ---------------------------------------------------------------

class Cassette:
    """Append-only JSONL of request/response pairs; one record per line.

    Digests are unique within a cassette: re-recording a request that is
    already on file is a no-op, so repeated identical requests in one run
    yield a single record.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._digests: set[str] | None = None

    def append(self, digest: str, request: dict, response: dict) -> None:
        with self._lock:
            if self._digests is None:
                self._digests = ({r["digest"] for r in Cassette.read(self.path)}
                                 if self.path.exists() else set())
            if digest in self._digests:
                return
            record = {
                "digest": digest,
                "request": request,
                "response": response,
                "timestamp": datetime.now(timezone.utc).isoformat(),
            }
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")
            self._digests.add(digest)

    @staticmethod
    def read(path: str | Path) -> list[dict]:
        records = []
        for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines()):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"corrupt cassette record on line {i + 1}: {exc}") from None
            records.append(rec)
        digests = [r["digest"] for r in records]
        if len(set(digests)) != len(digests):
            raise ValueError("cassette contains duplicate request digests")
        return records


# -- transports ---------------------------------------------------------------

class ScriptedTransport:
    """Pops queued response strings in order; exhausting the queue is an error."""

    def __init__(self, responses: Iterable[str]):
        self.queue: deque[str] = deque(responses)
        self.requests: list[dict] = []

    def send(self, request: dict, digest: str, *, timeout: float = 60.0,
             max_retries: int = 0) -> dict:
        if not self.queue:
            raise TransportError("scripted transport queue is empty")
        self.requests.append(request)
        return scripted_response_body(self.queue.popleft(), request.get("model", "scripted"))


class ReplayTransport:
    """Replays a cassette: fresh requests must arrive in recorded order, while
    requests whose digest was already consumed replay their single recorded
    response (cassettes deduplicate identical requests on recording)."""

    def __init__(self, cassette_path: str | Path):
        self.path = Path(cassette_path)
        self.records = Cassette.read(self.path)
        self.cursor = 0
        self._consumed: dict[str, dict] = {}
        self._lock = threading.Lock()

    def send(self, request: dict, digest: str, *, timeout: float = 60.0,
             max_retries: int = 0) -> dict:
        with self._lock:
            if self.cursor < len(self.records) \
                    and self.records[self.cursor]["digest"] == digest:
                record = self.records[self.cursor]
                self.cursor += 1
                self._consumed[digest] = record["response"]
                return record["response"]
            if digest in self._consumed:
                return self._consumed[digest]
            if self.cursor >= len(self.records):
                raise TransportError(f"cassette {self.path} exhausted "
                                     f"after {self.cursor} records")
            record = self.records[self.cursor]
            raise ReplayMismatchError(
                f"replay digest mismatch at record {self.cursor}: cassette has "
                f"{record['digest'][:12]}..., request is {digest[:12]}...")


def _default_post(url: str, headers: dict, body: dict, timeout: float) -> tuple[int, dict]:
    resp = requests.post(url, headers=headers, json=body, timeout=timeout)
    try:
        payload = resp.json()
    except ValueError:
        payload = {"error": resp.text}
    return resp.status_code, payload


class LiveTransport:
    """POSTs chat-completion requests, retrying transient failures with
    exponential backoff (total sleep bounded by ``backoff_ceiling`` seconds)."""

    def __init__(self, endpoint_url: str, api_key_env: str = API_KEY_ENV,
                 record_path: str | Path | None = None,
                 backoff_base: float = 1.0, backoff_max: float = 30.0,
                 backoff_ceiling: float = 120.0, concurrency_limit: int = 4,
                 sleeper: Callable[[float], None] = time.sleep,
                 http_post: Callable[..., tuple[int, dict]] = _default_post):
        self.endpoint_url = endpoint_url
        self.api_key_env = api_key_env
        self.cassette = Cassette(record_path) if record_path else None
        self.backoff_base = backoff_base
        self.backoff_max = backoff_max
        self.backoff_ceiling = backoff_ceiling
        self._semaphore = threading.Semaphore(max(1, concurrency_limit))
        self._sleep = sleeper
        self._post = http_post

    @property
    def url(self) -> str:
        base = self.endpoint_url.rstrip("/")
        return base if base.endswith("/chat/completions") else base + "/chat/completions"

    def send(self, request: dict, digest: str, *, timeout: float = 60.0,
             max_retries: int = 3) -> dict:
        api_key = os.environ.get(self.api_key_env)
        if not api_key:
            raise TransportError(f"credential missing: set ${self.api_key_env}")
        headers = {"Authorization": f"Bearer {api_key}",
                   "Content-Type": "application/json"}
        attempts = 0
        sleep_left = self.backoff_ceiling
        last_error = "unknown error"
        for attempt in range(max_retries + 1):
            attempts += 1
            try:
                with self._semaphore:
                    status, body = self._post(self.url, headers, request, timeout)
            except (requests.RequestException, ConnectionError, OSError) as exc:
                last_error = f"connection failure: {exc}"
            else:
                if status == 200:
                    if self.cassette is not None:
                        self.cassette.append(digest, request, body)
                    return body
                last_error = f"HTTP {status}: {body}"
                if status not in _TRANSIENT_STATUS:
                    raise TransportError(f"non-retriable {last_error}", attempts=attempts)
            if attempt < max_retries:
                delay = min(self.backoff_base * 2 ** attempt, self.backoff_max, sleep_left)
                if delay > 0:
                    self._sleep(delay)
                    sleep_left -= delay
        raise TransportError(f"exhausted retries after {attempts} attempts; "
                             f"last error: {last_error}", attempts=attempts)


Transport = ScriptedTransport | ReplayTransport | LiveTransport


# -- response cache ------------------------------------------------------------

class ResponseCache:
    """Content-addressed cache of assistant responses, one file per digest.

    Corrupt entries are treated as misses and evicted.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self._lock = threading.Lock()

    def _path(self, digest: str) -> Path:
        return self.directory / f"{digest}.json"

    def lookup(self, digest: str) -> str | None:
        path = self._path(digest)
        try:
            entry = json.loads(path.read_text(encoding="utf-8"))
            content = entry["content"]
            if not isinstance(content, str):
                raise ValueError("content is not text")
            return content
        except FileNotFoundError:
            return None
        except (ValueError, KeyError, OSError):
            with self._lock:
                path.unlink(missing_ok=True)
            return None

    def store(self, digest: str, content: str) -> None:
        with self._lock:
            self.directory.mkdir(parents=True, exist_ok=True)
            tmp = self._path(digest).with_suffix(".tmp")
            tmp.write_text(json.dumps({"digest": digest, "content": content},
                                      ensure_ascii=False), encoding="utf-8")
            tmp.replace(self._path(digest))


def cache_lookup(messages: Sequence[Message], params: ChatParams,
                 cache: ResponseCache) -> Message | None:
    """Cached assistant message for this conversation, or None on a miss."""
    content = cache.lookup(request_digest(messages, params))
    return Message(role="assistant", content=content) if content is not None else None


def complete_chat(messages: Sequence[Message], params: ChatParams,
                  transport: Transport, cache: ResponseCache | None = None) -> Message:
    """One chat-completion round trip; returns the assistant message.

    A cache hit suppresses the transport call entirely; misses fall through
    and store the result.
    """
    validate_conversation(messages)
    if messages[-1].role != "user":
        raise ValueError("conversation must end with a user message")
    digest = request_digest(messages, params)
    if cache is not None:
        hit = cache.lookup(digest)
        if hit is not None:
            return Message(role="assistant", content=hit)
    body = build_request_body(messages, params)
    response = transport.send(body, digest, timeout=params.request_timeout,
                              max_retries=params.max_retries)
    content = response_content(response)
    if cache is not None:
        cache.store(digest, content)
    return Message(role="assistant", content=content)
