import functools
import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest
import requests

from finsent.errors import InvalidInputError, InvalidProbabilityError, RemoteError
from finsent.scoring import (
    BackendConfig,
    MockBackend,
    NspScoreRequest,
    NspScoreResponse,
    RemoteBackend,
    SentimentScoreRequest,
    SentimentScoreResponse,
    fnv1a_64,
    make_backend,
    score_batch,
)


def fnv1a_64_oracle(data: bytes) -> int:
    """Independent FNV-1a 64 for cross-checking (reduce-based formulation)."""
    return functools.reduce(
        lambda h, b: ((h ^ b) * 1099511628211) % 2**64, data, 14695981039346656037
    )


# -- hash and mock backends ---------------------------------------------------

@pytest.mark.parametrize(
    "data,expected",
    [
        (b"", 14695981039346656037),        # offset basis
        (b"a", 0xAF63DC4C8601EC8C),         # published FNV-1a 64 vector
        (b"foobar", 0x85944171F73967E8),    # published FNV-1a 64 vector
    ],
)
def test_fnv_known_vectors(data, expected):
    assert fnv1a_64(data) == expected
    assert fnv1a_64_oracle(data) == expected


def test_mock_nsp_matches_independent_oracle():
    backend = MockBackend()
    h = fnv1a_64_oracle(b"x" + b"\x1f" + b"y")
    assert backend.predict_nsp("x", "y") == (h % 1000) / 999


def test_mock_nsp_deterministic_and_bounded():
    backend = MockBackend()
    for a, b in [("x", "y"), ("Profit rose .", "Sales fell ."), ("", "b")]:
        first = backend.predict_nsp(a, b)
        assert first == backend.predict_nsp(a, b)
        assert 0.0 <= first <= 1.0


def test_mock_nsp_separator_prevents_boundary_collisions():
    backend = MockBackend()
    assert backend.predict_nsp("ab", "c") != backend.predict_nsp("a", "bc")


def test_mock_sentiment_one_hot_of_hash():
    backend = MockBackend()
    probs = backend.classify_sentiment("Profit rose .")
    assert set(probs) == {"negative", "neutral", "positive"}
    assert sorted(probs.values()) == [0.0, 0.0, 1.0]
    winner = fnv1a_64_oracle("Profit rose .".encode()) % 3
    assert probs[["negative", "neutral", "positive"][winner]] == 1.0


def test_mock_sentiment_empty_text_rejected():
    with pytest.raises(InvalidInputError):
        MockBackend().classify_sentiment("")


# -- batch scoring ------------------------------------------------------------

def test_batch_order_preserved():
    reqs = [NspScoreRequest("a", "b"), SentimentScoreRequest("ok text"), NspScoreRequest("c", "d")]
    responses = score_batch(MockBackend(), reqs)
    assert isinstance(responses[0], NspScoreResponse)
    assert isinstance(responses[1], SentimentScoreResponse)
    assert isinstance(responses[2], NspScoreResponse)
    assert responses[0].p_is_next == MockBackend().predict_nsp("a", "b")


def test_batch_partial_failure_keeps_slot():
    reqs = [SentimentScoreRequest("fine"), SentimentScoreRequest(""), SentimentScoreRequest("also fine")]
    responses = score_batch(MockBackend(), reqs)
    assert isinstance(responses[0], SentimentScoreResponse)
    assert isinstance(responses[1], InvalidInputError)
    assert isinstance(responses[2], SentimentScoreResponse)


def test_batch_empty_rejected():
    with pytest.raises(InvalidInputError):
        score_batch(MockBackend(), [])


def test_batch_in_flight_high_water_mark():
    lock = threading.Lock()
    state = {"now": 0, "peak": 0}

    class InstrumentedBackend(MockBackend):
        def predict_nsp(self, a, b):
            with lock:
                state["now"] += 1
                state["peak"] = max(state["peak"], state["now"])
            time.sleep(0.0002)
            with lock:
                state["now"] -= 1
            return super().predict_nsp(a, b)

    reqs = [NspScoreRequest(str(i), str(i + 1)) for i in range(10000)]
    responses = score_batch(InstrumentedBackend(), reqs, max_in_flight=8)
    assert len(responses) == 10000
    assert state["peak"] <= 8


# -- backend config -----------------------------------------------------------

def test_backend_config_validation():
    with pytest.raises(ValueError):
        BackendConfig(kind="remote")  # endpoint required
    with pytest.raises(ValueError):
        BackendConfig(kind="mock", max_in_flight=0)
    with pytest.raises(ValueError):
        BackendConfig(kind="neither")
    assert isinstance(make_backend(BackendConfig()), MockBackend)


# -- remote client: retry semantics via injected session -----------------------

class FakeResponse:
    def __init__(self, status_code, payload):
        self.status_code = status_code
        self._payload = payload
        self.text = json.dumps(payload)

    def json(self):
        return self._payload


class FakeSession:
    def __init__(self, script):
        self.script = list(script)
        self.calls = 0

    def post(self, url, json=None, timeout=None):
        self.calls += 1
        action = self.script.pop(0)
        if isinstance(action, Exception):
            raise action
        return action


def remote(session, retries=2):
    config = BackendConfig(kind="remote", endpoint="http://fake", retries=retries)
    return RemoteBackend(config, session=session)


def test_remote_retries_transport_errors_then_succeeds():
    session = FakeSession([
        requests.ConnectionError("boom"),
        requests.ConnectionError("boom"),
        FakeResponse(200, {"p_is_next": 0.7}),
    ])
    assert remote(session).predict_nsp("a", "b") == 0.7
    assert session.calls == 3


def test_remote_timeout_after_retries():
    session = FakeSession([requests.Timeout("slow")] * 3)
    with pytest.raises(TimeoutError):
        remote(session, retries=2).predict_nsp("a", "b")
    assert session.calls == 3


def test_remote_no_retry_on_http_error():
    session = FakeSession([FakeResponse(503, {"error": "down"})])
    with pytest.raises(RemoteError) as excinfo:
        remote(session).predict_nsp("a", "b")
    assert excinfo.value.status == 503
    assert session.calls == 1  # a well-formed response is never retried


def test_remote_rejects_out_of_range_probability():
    session = FakeSession([FakeResponse(200, {"p_is_next": 1.5})])
    with pytest.raises(InvalidProbabilityError):
        remote(session).predict_nsp("a", "b")


def test_remote_rejects_unnormalized_sentiment():
    payload = {"probs": {"negative": 0.5, "neutral": 0.5, "positive": 0.5}}
    session = FakeSession([FakeResponse(200, payload)])
    with pytest.raises(InvalidProbabilityError):
        remote(session).classify_sentiment("text")


# -- remote client: wire format against a live stub server --------------------

class StubHandler(BaseHTTPRequestHandler):
    def log_message(self, *args):
        pass

    def _reply(self, status, payload):
        body = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        if self.path == "/v1/health":
            self._reply(200, {"status": "ok", "model": "stub"})
        else:
            self._reply(404, {"error": "not found"})

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        body = json.loads(self.rfile.read(length))
        if self.path == "/v1/nsp":
            self._reply(200, {"p_is_next": 0.25 if "fail" in body["sentence_a"] else 0.75})
        elif self.path == "/v1/sentiment":
            self._reply(200, {"probs": {"negative": 0.2, "neutral": 0.5, "positive": 0.3}})
        else:
            self._reply(404, {"error": "not found"})


@pytest.fixture(scope="module")
def stub_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()


def test_remote_against_stub_server(stub_server):
    backend = RemoteBackend(BackendConfig(kind="remote", endpoint=stub_server))
    assert backend.predict_nsp("a", "b") == 0.75
    assert backend.predict_nsp("fail here", "b") == 0.25
    probs = backend.classify_sentiment("Profit rose .")
    assert abs(sum(probs.values()) - 1.0) <= 1e-6
    assert backend.health()["status"] == "ok"


def test_remote_404_raises_remote_error(stub_server):
    config = BackendConfig(kind="remote", endpoint=stub_server + "/missing")
    with pytest.raises(RemoteError) as excinfo:
        RemoteBackend(config).predict_nsp("a", "b")
    assert excinfo.value.status == 404
