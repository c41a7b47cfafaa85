"""HTTP scoring endpoint over a directory of rule documents.

Wire contract (JSON both ways):

    GET  /rules  -> array of rule documents
    POST /score  body {"symptoms": ["name", ...]}
                 -> array of {syndrome, positiveLabel, totalScore,
                              threshold, decision, contributions}

Scoring delegates to ``apply_rule``, so the endpoint can never disagree
with the library.  The server is stateless per request and safe under
concurrent access: rules are loaded once and never mutated.
"""

from __future__ import annotations

import json
import warnings
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .io import read_rules_dir, rule_to_doc
from .rules import ClassificationRule, apply_rule


def score_case(rules: list[ClassificationRule], symptoms: list[str]) -> list[dict]:
    out = []
    for rule in rules:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # stray symptom names are expected here
            decision = apply_rule(rule, symptoms)
        out.append({
            "syndrome": rule.syndrome_name,
            "positiveLabel": rule.positive_label,
            "totalScore": decision.total_score,
            "threshold": rule.threshold,
            "decision": decision.decision,
            "contributions": decision.contributions,
        })
    return out


def _make_handler(rules: list[ClassificationRule]):
    rule_docs = [rule_to_doc(r) for r in rules]

    class Handler(BaseHTTPRequestHandler):
        server_version = "ltmkit"

        def _send(self, status: int, payload) -> None:
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.end_headers()
            self.wfile.write(body)

        def do_OPTIONS(self):  # CORS preflight for the browser UI
            self._send(204, {})

        def do_GET(self):
            if self.path.rstrip("/") == "/rules":
                self._send(200, rule_docs)
            else:
                self._send(404, {"error": f"unknown path {self.path!r}"})

        def do_POST(self):
            if self.path.rstrip("/") != "/score":
                self._send(404, {"error": f"unknown path {self.path!r}"})
                return
            try:
                length = int(self.headers.get("Content-Length", "0"))
                payload = json.loads(self.rfile.read(length) or b"{}")
            except (ValueError, json.JSONDecodeError):
                self._send(400, {"error": "body must be JSON"})
                return
            symptoms = payload.get("symptoms")
            if not isinstance(symptoms, list) or not all(
                    isinstance(s, str) for s in symptoms):
                self._send(400, {"error": "body must be {\"symptoms\": [string, ...]}"})
                return
            self._send(200, score_case(rules, symptoms))

        def log_message(self, *args):  # quiet by default
            pass

    return Handler


def make_server(rules_dir, host: str = "127.0.0.1", port: int = 8000) -> ThreadingHTTPServer:
    """Build (but do not start) the scoring server; raises on bind failure."""
    rules = read_rules_dir(rules_dir)
    return ThreadingHTTPServer((host, port), _make_handler(rules))


def serve(rules_dir, bind_address: str = "127.0.0.1:8000") -> None:
    """Run the scoring endpoint until interrupted."""
    host, _, port = bind_address.partition(":")
    server = make_server(rules_dir, host or "127.0.0.1", int(port or "8000"))
    host, port = server.server_address[:2]
    print(f"serving rules on http://{host}:{port} (GET /rules, POST /score)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
