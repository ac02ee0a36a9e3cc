import json
import random
import threading

import pytest
import requests

from finetune_harness.server import ScoringService, serve


@pytest.fixture(scope="module")
def endpoint(sentiment_base, nsp_base, vocab_path):
    service = ScoringService(vocab_path, nsp_model=nsp_base, sentiment_model=sentiment_base)
    server = serve(service)
    host, port = server.server_address
    yield f"http://{host}:{port}"
    server.shutdown()


def test_health(endpoint):
    payload = requests.get(endpoint + "/v1/health", timeout=5).json()
    assert payload["status"] == "ok"
    assert payload["model"] == "nsp+sentiment"


def test_nsp_round_trip_in_bounds(endpoint):
    body = {"sentence_a": "Profit rose in 2009 .", "sentence_b": "The board proposed a dividend ."}
    payload = requests.post(endpoint + "/v1/nsp", json=body, timeout=5).json()
    assert 0.0 <= payload["p_is_next"] <= 1.0


def test_sentiment_round_trip_normalized(endpoint):
    payload = requests.post(endpoint + "/v1/sentiment",
                            json={"text": "Net sales fell sharply ."}, timeout=5).json()
    assert set(payload["probs"]) == {"negative", "neutral", "positive"}
    assert abs(sum(payload["probs"].values()) - 1.0) <= 1e-6


def test_responses_deterministic(endpoint):
    body = {"sentence_a": "A .", "sentence_b": "B ."}
    first = requests.post(endpoint + "/v1/nsp", json=body, timeout=5).json()
    second = requests.post(endpoint + "/v1/nsp", json=body, timeout=5).json()
    assert first == second


def test_malformed_json_gets_400(endpoint):
    response = requests.post(endpoint + "/v1/nsp", data=b"{not json",
                             headers={"Content-Type": "application/json"}, timeout=5)
    assert response.status_code == 400


def test_unknown_path_gets_404(endpoint):
    assert requests.post(endpoint + "/v1/other", json={}, timeout=5).status_code == 404
    assert requests.get(endpoint + "/v1/nope", timeout=5).status_code == 404


def test_concurrent_requests(endpoint):
    errors = []

    def hit(i):
        try:
            body = {"sentence_a": f"Sentence {i} .", "sentence_b": "Next ."}
            payload = requests.post(endpoint + "/v1/nsp", json=body, timeout=10).json()
            assert 0.0 <= payload["p_is_next"] <= 1.0
        except Exception as exc:
            errors.append(exc)

    threads = [threading.Thread(target=hit, args=(i,)) for i in range(16)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert errors == []


# -- [SECONDARY] 1000-request protocol fuzz ------------------------------------

def test_wire_protocol_fuzz_1000(endpoint):
    rng = random.Random(424242)
    session = requests.Session()
    words = ["profit", "rose", "fell", "sales", "eur", "mn", "quarter", "outlook", "."]

    def sentence():
        return " ".join(rng.choices(words, k=rng.randint(1, 12)))

    checked = 0
    for i in range(1000):
        kind = rng.randrange(6)
        if kind == 0:  # valid NSP
            r = session.post(endpoint + "/v1/nsp",
                             json={"sentence_a": sentence(), "sentence_b": sentence()}, timeout=10)
            assert r.status_code == 200
            payload = r.json()
            assert set(payload) == {"p_is_next"}
            assert 0.0 <= payload["p_is_next"] <= 1.0
        elif kind == 1:  # valid sentiment
            r = session.post(endpoint + "/v1/sentiment", json={"text": sentence()}, timeout=10)
            assert r.status_code == 200
            probs = r.json()["probs"]
            assert set(probs) == {"negative", "neutral", "positive"}
            assert abs(sum(probs.values()) - 1.0) <= 1e-6
            assert all(v >= 0 for v in probs.values())
        elif kind == 2:  # health
            r = session.get(endpoint + "/v1/health", timeout=10)
            assert r.status_code == 200
            assert r.json()["status"] == "ok"
        elif kind == 3:  # malformed JSON body
            r = session.post(endpoint + rng.choice(["/v1/nsp", "/v1/sentiment"]),
                             data=rng.choice([b"{", b"[1,2", b"\xff\xfe", b"null", b'"x"']),
                             headers={"Content-Type": "application/json"}, timeout=10)
            assert r.status_code == 400
        elif kind == 4:  # schema violations: missing or mistyped fields
            bad_nsp = rng.choice([
                {}, {"sentence_a": "x"}, {"sentence_a": 5, "sentence_b": "y"},
                {"sentence_a": None, "sentence_b": "y"},
            ])
            r = session.post(endpoint + "/v1/nsp", json=bad_nsp, timeout=10)
            assert r.status_code == 400
            bad_sentiment = rng.choice([{}, {"text": 7}, {"text": ""}, {"body": "x"}])
            r = session.post(endpoint + "/v1/sentiment", json=bad_sentiment, timeout=10)
            assert r.status_code == 400
        else:  # unknown path
            r = session.post(endpoint + f"/v1/bogus{i}", json={"x": 1}, timeout=10)
            assert r.status_code == 404
        checked += 1

    assert checked == 1000
    print("ACCEPTANCE PASS: wire-protocol fuzz (1000 requests, 100% conformant)")
