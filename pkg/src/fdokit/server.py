"""Resolution service over HTTP, plus a small client for it.

Endpoints:

  GET  /fdo/{percent-encoded-identifier}        the stored metadata slice as
                                                application/trig, with the
                                                content hash in the ETag header
  GET  /fdo/{percent-encoded-identifier}/type   JSON classification summary
  POST /deposit                                 application/trig body; returns
                                                a JSON list of deposited
                                                {"gupri", "etag"} pairs
                                                (?force=1 skips validation when
                                                the server allows it)

Errors are JSON problem bodies {"status", "error", "detail"} with statuses
400 (unreadable input), 404 (unknown identifier), 409 (content conflict),
and 422 (validation failure or unresolvable deposit).
"""

from __future__ import annotations

import json
import logging
import threading
import urllib.error
import urllib.parse
import urllib.request
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .model import ClassificationSummary
from .registry import (
    DepositConflictError,
    DepositValidationError,
    NoDescribingRecordError,
    RegistryStore,
    UnknownGupriError,
)
from .shapes import ShapeRegistry
from .trig import ParseError, parse_trig
from .validator import render_report

logger = logging.getLogger(__name__)

DEFAULT_BIND = "127.0.0.1:8315"
BIND_ENV_VAR = "FDOKIT_BIND"


def _classification_payload(summary: ClassificationSummary) -> dict:
    return {
        "kinds": list(summary.kinds),
        "info_types": list(summary.info_types),
        "encoding_formats": list(summary.encoding_formats),
    }


class RegistryHTTPServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(
        self,
        address: tuple[str, int],
        store: RegistryStore,
        shapes: ShapeRegistry | None = None,
        allow_force: bool = True,
    ) -> None:
        super().__init__(address, _Handler)
        self.store = store
        self.shapes = shapes
        self.allow_force = allow_force


class _Handler(BaseHTTPRequestHandler):
    server: RegistryHTTPServer
    protocol_version = "HTTP/1.1"

    def log_message(self, format: str, *args) -> None:
        logger.debug("%s - %s", self.address_string(), format % args)

    def _send_json(self, status: int, payload) -> None:
        body = json.dumps(payload, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_problem(self, status: int, error: str, detail: str, extra: dict | None = None) -> None:
        payload = {"status": status, "error": error, "detail": detail}
        if extra:
            payload.update(extra)
        self._send_json(status, payload)

    def do_GET(self) -> None:  # noqa: N802 (http.server API)
        parts = urllib.parse.urlsplit(self.path)
        segments = [s for s in parts.path.split("/") if s]
        if len(segments) >= 2 and segments[0] == "fdo":
            gupri = urllib.parse.unquote(segments[1])
            if len(segments) == 2:
                self._get_record(gupri)
                return
            if len(segments) == 3 and segments[2] == "type":
                self._get_type(gupri)
                return
        self._send_problem(404, "not-found", f"no such endpoint: {parts.path}")

    def _get_record(self, gupri: str) -> None:
        try:
            text, etag = self.server.store.resolve_text(gupri)
        except UnknownGupriError:
            self._send_problem(404, "not-found", f"unknown identifier: {gupri}")
            return
        except NoDescribingRecordError:
            self._send_problem(
                422, "no-describing-record", f"no stored content describes {gupri}"
            )
            return
        body = text.encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/trig")
        self.send_header("ETag", f'"{etag}"')
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _get_type(self, gupri: str) -> None:
        try:
            summary = self.server.store.describe_type(gupri)
        except UnknownGupriError:
            self._send_problem(404, "not-found", f"unknown identifier: {gupri}")
            return
        self._send_json(200, _classification_payload(summary))

    def do_POST(self) -> None:  # noqa: N802 (http.server API)
        parts = urllib.parse.urlsplit(self.path)
        if parts.path.rstrip("/") != "/deposit":
            self._send_problem(404, "not-found", f"no such endpoint: {parts.path}")
            return
        query = urllib.parse.parse_qs(parts.query)
        force = query.get("force", ["0"])[0] in ("1", "true", "yes")
        if force and not self.server.allow_force:
            self._send_problem(403, "force-not-allowed", "forced deposits are disabled")
            return
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length)
        try:
            dataset = parse_trig(raw.decode("utf-8"))
        except (ParseError, UnicodeDecodeError) as exc:
            self._send_problem(400, "unparseable", str(exc))
            return
        try:
            results = self.server.store.deposit(
                dataset, shapes=self.server.shapes, force=force
            )
        except DepositValidationError as exc:
            self._send_problem(
                422,
                "validation-failed",
                str(exc),
                extra={"report": json.loads(render_report(exc.report, "json"))},
            )
            return
        except DepositConflictError as exc:
            self._send_problem(409, "conflict", str(exc))
            return
        self._send_json(201, [{"gupri": g, "etag": e} for g, e in results])


def parse_bind(bind: str) -> tuple[str, int]:
    host, _, port = bind.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"bind address must be host:port, got {bind!r}")
    return host, int(port)


def make_server(
    store: RegistryStore,
    bind: str = DEFAULT_BIND,
    shapes: ShapeRegistry | None = None,
    allow_force: bool = True,
) -> RegistryHTTPServer:
    return RegistryHTTPServer(parse_bind(bind), store, shapes, allow_force)


def start_in_background(server: RegistryHTTPServer) -> threading.Thread:
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return thread


# -- client ------------------------------------------------------------------


class ResolutionProblem(Exception):
    """The service answered with a problem body (or transport failed)."""

    def __init__(self, status: int, payload: dict | None = None) -> None:
        detail = (payload or {}).get("detail", "")
        super().__init__(f"HTTP {status}: {detail}")
        self.status = status
        self.payload = payload or {}


def _request(url: str, data: bytes | None = None, content_type: str | None = None):
    request = urllib.request.Request(url, data=data)
    if content_type:
        request.add_header("Content-Type", content_type)
    try:
        return urllib.request.urlopen(request, timeout=30)
    except urllib.error.HTTPError as exc:
        try:
            payload = json.loads(exc.read().decode("utf-8"))
        except ValueError:
            payload = {}
        raise ResolutionProblem(exc.code, payload) from exc


def record_url(endpoint: str, gupri: str) -> str:
    return f"{endpoint.rstrip('/')}/fdo/{urllib.parse.quote(gupri, safe='')}"


def fetch_record(endpoint: str, gupri: str) -> tuple[str, str]:
    """GET the metadata slice for an identifier; returns (TriG text, etag)."""
    with _request(record_url(endpoint, gupri)) as response:
        etag = (response.headers.get("ETag") or "").strip('"')
        return response.read().decode("utf-8"), etag


def fetch_type(endpoint: str, gupri: str) -> dict:
    with _request(record_url(endpoint, gupri) + "/type") as response:
        return json.loads(response.read().decode("utf-8"))


def post_deposit(endpoint: str, trig_text: str, force: bool = False) -> list[dict]:
    url = f"{endpoint.rstrip('/')}/deposit"
    if force:
        url += "?force=1"
    with _request(url, trig_text.encode("utf-8"), "application/trig") as response:
        return json.loads(response.read().decode("utf-8"))
