"""Scorer backends: deterministic mocks and an HTTP client for a model server.

Two scorer roles exist: a next-sentence probability scorer (drives the
concatenation gate) and a 3-class sentiment classifier. The mock backends are
pure functions of their text inputs via FNV-1a 64, so independent
implementations produce identical gate decisions.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import requests

from .corpus import LABEL_NAMES
from .errors import InvalidInputError, InvalidProbabilityError, RemoteError

FNV64_OFFSET = 14695981039346656037
FNV64_PRIME = 1099511628211
_PAIR_SEPARATOR = b"\x1f"


def fnv1a_64(data: bytes) -> int:
    h = FNV64_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV64_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


@dataclass(frozen=True)
class NspScoreRequest:
    sentence_a: str
    sentence_b: str


@dataclass(frozen=True)
class NspScoreResponse:
    p_is_next: float


@dataclass(frozen=True)
class SentimentScoreRequest:
    text: str


@dataclass(frozen=True)
class SentimentScoreResponse:
    probs: dict[str, float]


@dataclass
class BackendConfig:
    kind: str = "mock"
    endpoint: str = ""
    timeout: float = 10.0
    max_in_flight: int = 8
    retries: int = 2

    def __post_init__(self):
        if self.kind not in ("mock", "remote"):
            raise ValueError(f"backend kind must be 'mock' or 'remote', got {self.kind!r}")
        if self.kind == "remote" and not self.endpoint:
            raise ValueError("remote backend requires an endpoint")
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")


def _check_nsp_probability(p: float) -> float:
    if not (0.0 <= p <= 1.0):
        raise InvalidProbabilityError(f"p_is_next out of [0,1]: {p!r}")
    return p


def _check_sentiment_probs(probs: dict) -> dict[str, float]:
    if sorted(probs) != sorted(LABEL_NAMES):
        raise InvalidProbabilityError(f"expected classes {LABEL_NAMES}, got {sorted(probs)}")
    values = [float(probs[name]) for name in LABEL_NAMES]
    if any(v < 0 for v in values) or abs(sum(values) - 1.0) > 1e-6:
        raise InvalidProbabilityError(f"invalid probability vector: {probs!r}")
    return {name: float(probs[name]) for name in LABEL_NAMES}


class MockBackend:
    """Deterministic scorer: FNV-1a 64 over the UTF-8 input bytes."""

    def predict_nsp(self, sentence_a: str, sentence_b: str) -> float:
        h = fnv1a_64(sentence_a.encode("utf-8") + _PAIR_SEPARATOR + sentence_b.encode("utf-8"))
        return (h % 1000) / 999

    def classify_sentiment(self, text: str) -> dict[str, float]:
        if not text:
            raise InvalidInputError("cannot classify empty text")
        winner = fnv1a_64(text.encode("utf-8")) % 3
        return {name: 1.0 if i == winner else 0.0 for i, name in enumerate(LABEL_NAMES)}

    def health(self) -> dict:
        return {"status": "ok", "model": "mock"}


class RemoteBackend:
    """HTTP client for the scoring wire protocol (JSON over POST, UTF-8).

    Retries apply to transport failures only; a well-formed non-2xx response
    raises RemoteError immediately so recorded scores stay deterministic.
    Safe for concurrent use (requests.Session is thread-safe for our usage).
    """

    def __init__(self, config: BackendConfig, session: requests.Session | None = None):
        if config.kind != "remote":
            raise ValueError("RemoteBackend requires a config with kind='remote'")
        self.config = config
        self._session = session or requests.Session()

    def _post(self, path: str, body: dict) -> dict:
        url = self.config.endpoint.rstrip("/") + path
        last_exc: Exception | None = None
        for attempt in range(self.config.retries + 1):
            try:
                resp = self._session.post(url, json=body, timeout=self.config.timeout)
            except requests.Timeout as exc:
                last_exc = exc
            except requests.ConnectionError as exc:
                last_exc = exc
            else:
                if not (200 <= resp.status_code < 300):
                    raise RemoteError(resp.status_code, resp.text[:200])
                try:
                    return resp.json()
                except ValueError as exc:
                    raise RemoteError(resp.status_code, f"non-JSON body: {exc}") from exc
            if attempt < self.config.retries:
                time.sleep(min(0.1 * 2**attempt, 1.0))
        if isinstance(last_exc, requests.Timeout):
            raise TimeoutError(f"request to {url} timed out after {self.config.retries + 1} attempts")
        raise RemoteError(0, f"transport failure after {self.config.retries + 1} attempts: {last_exc}")

    def predict_nsp(self, sentence_a: str, sentence_b: str) -> float:
        payload = self._post("/v1/nsp", {"sentence_a": sentence_a, "sentence_b": sentence_b})
        return _check_nsp_probability(float(payload["p_is_next"]))

    def classify_sentiment(self, text: str) -> dict[str, float]:
        if not text:
            raise InvalidInputError("cannot classify empty text")
        payload = self._post("/v1/sentiment", {"text": text})
        return _check_sentiment_probs(payload["probs"])

    def health(self) -> dict:
        url = self.config.endpoint.rstrip("/") + "/v1/health"
        resp = self._session.get(url, timeout=self.config.timeout)
        if not (200 <= resp.status_code < 300):
            raise RemoteError(resp.status_code, resp.text[:200])
        return resp.json()


def make_backend(config: BackendConfig):
    return MockBackend() if config.kind == "mock" else RemoteBackend(config)


def score_batch(
    backend,
    requests_: Sequence[NspScoreRequest | SentimentScoreRequest],
    max_in_flight: int = 8,
) -> list:
    """Score a batch, responses positionally aligned with requests.

    Items that fail keep their slot: the returned element is the exception
    instance instead of a response, so one bad item never aborts the batch.
    """
    if not requests_:
        raise InvalidInputError("empty batch")

    def one(req):
        try:
            if isinstance(req, NspScoreRequest):
                return NspScoreResponse(backend.predict_nsp(req.sentence_a, req.sentence_b))
            if isinstance(req, SentimentScoreRequest):
                return SentimentScoreResponse(backend.classify_sentiment(req.text))
            raise InvalidInputError(f"unsupported request type: {type(req).__name__}")
        except Exception as exc:
            return exc

    with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
        return list(pool.map(one, requests_))
