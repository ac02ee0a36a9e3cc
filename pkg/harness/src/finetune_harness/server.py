"""HTTP scoring service implementing the toolkit wire protocol.

Endpoints: POST /v1/nsp, POST /v1/sentiment, GET /v1/health. JSON bodies,
UTF-8. Malformed or mistyped bodies get HTTP 400; unknown paths 404. Built
on the stdlib threading server so status codes stay fully under our control.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import torch

from .data import load_tokenizer
from .model import NSP_CLASSES, SENTIMENT_CLASSES, load_model


class ScoringService:
    """Holds the loaded models; one instance backs every handler thread."""

    def __init__(self, vocab_path: Path, nsp_model: Path | None = None,
                 sentiment_model: Path | None = None):
        if nsp_model is None and sentiment_model is None:
            raise ValueError("serve needs at least one model")
        self.tokenizer = load_tokenizer(vocab_path)
        self._lock = threading.Lock()
        self.models = {}
        if nsp_model is not None:
            model, spec, task = load_model(nsp_model)
            if task != "nsp":
                raise ValueError(f"{nsp_model} is a {task} model, expected nsp")
            self.models["nsp"] = (model, spec)
        if sentiment_model is not None:
            model, spec, task = load_model(sentiment_model)
            if task != "sentiment":
                raise ValueError(f"{sentiment_model} is a {task} model, expected sentiment")
            self.models["sentiment"] = (model, spec)

    def model_name(self) -> str:
        return "+".join(sorted(self.models))

    def _probs(self, task: str, text_a: str, text_b: str | None):
        model, spec = self.models[task]
        with self._lock, torch.no_grad():
            if text_b is None:
                encoded = self.tokenizer(text_a, truncation=True,
                                         max_length=spec.max_positions, return_tensors="pt")
            else:
                encoded = self.tokenizer(text_a, text_b, truncation=True,
                                         max_length=spec.max_positions, return_tensors="pt")
            return torch.softmax(model(**encoded).logits[0], dim=-1)

    def score_nsp(self, sentence_a: str, sentence_b: str) -> float:
        probs = self._probs("nsp", sentence_a, sentence_b)
        return float(probs[NSP_CLASSES.index("isNext")])

    def classify(self, text: str) -> dict[str, float]:
        probs = self._probs("sentiment", text, None)
        return {name: float(p) for name, p in zip(SENTIMENT_CLASSES, probs)}


class _BadRequest(Exception):
    pass


def _make_handler(service: ScoringService):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *args):
            pass

        def _send(self, status: int, payload: dict):
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length)
            try:
                payload = json.loads(raw)
            except (json.JSONDecodeError, UnicodeDecodeError):
                raise _BadRequest("body is not valid JSON") from None
            if not isinstance(payload, dict):
                raise _BadRequest("body must be a JSON object")
            return payload

        def _field(self, payload: dict, name: str, allow_empty: bool = True) -> str:
            value = payload.get(name)
            if not isinstance(value, str):
                raise _BadRequest(f"field {name!r} must be a string")
            if not allow_empty and not value:
                raise _BadRequest(f"field {name!r} must be non-empty")
            return value

        def do_GET(self):
            if self.path == "/v1/health":
                self._send(200, {"status": "ok", "model": service.model_name()})
            else:
                self._send(404, {"error": f"unknown path {self.path}"})

        def do_POST(self):
            try:
                if self.path == "/v1/nsp":
                    if "nsp" not in service.models:
                        self._send(404, {"error": "no NSP model loaded"})
                        return
                    payload = self._body()
                    p = service.score_nsp(
                        self._field(payload, "sentence_a"), self._field(payload, "sentence_b")
                    )
                    self._send(200, {"p_is_next": p})
                elif self.path == "/v1/sentiment":
                    if "sentiment" not in service.models:
                        self._send(404, {"error": "no sentiment model loaded"})
                        return
                    payload = self._body()
                    probs = service.classify(self._field(payload, "text", allow_empty=False))
                    self._send(200, {"probs": probs})
                else:
                    self._send(404, {"error": f"unknown path {self.path}"})
            except _BadRequest as exc:
                self._send(400, {"error": str(exc)})

    return Handler


def serve(service: ScoringService, host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    """Start the server on a background thread; caller owns shutdown()."""
    server = ThreadingHTTPServer((host, port), _make_handler(service))
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server
