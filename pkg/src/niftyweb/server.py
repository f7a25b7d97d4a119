"""TCP accept loop, routing, static files, and handler-to-HTTP mapping.

One request per connection, answered and closed.  A bounded worker pool
serves connections; each handler call runs under a time budget so a
looping handler turns into a 504 instead of a hung server.
"""

from __future__ import annotations

import socket
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .errors import BadQuery, HandlerFailure, HandlerTimeout
from .http1 import (
    MAX_BODY_BYTES,
    MAX_HEAD_BYTES,
    HttpRequest,
    HttpResponse,
    MalformedRequest,
    QueryParams,
    parse_query_string,
    parse_request,
    serialize_response,
)
from .results import ResultPage, encode_page

Handler = Callable[[QueryParams], "list"]

CONTENT_TYPES = {
    ".html": "text/html",
    ".js": "text/javascript",
    ".css": "text/css",
    ".json": "application/json",
    ".png": "image/png",
}

REASONS = {
    200: "OK", 400: "Bad Request", 404: "Not Found", 405: "Method Not Allowed",
    413: "Payload Too Large", 500: "Internal Server Error", 501: "Not Implemented",
    502: "Bad Gateway", 504: "Gateway Timeout",
}


@dataclass
class Route:
    method: str
    path: str
    handler: Handler


@dataclass
class HandlerOutcome:
    """Either a result list or a typed error kind, never both."""

    results: list | None = None
    error_kind: str | None = None   # BadQuery | HandlerFailure | Timeout | Fault
    detail: str = ""


def _error_response(status: int, message: str) -> HttpResponse:
    body = (message + "\n").encode("utf-8")
    return HttpResponse(status, REASONS.get(status, "Error"),
                        [("Content-Type", "text/plain; charset=utf-8")], body)


def _call_with_timeout(handler: Handler, params: QueryParams,
                       timeout_ms: int) -> HandlerOutcome:
    box: dict = {}

    def target():
        try:
            box["results"] = handler(params)
        except BaseException as exc:  # classified below; the server must survive
            box["error"] = exc

    t = threading.Thread(target=target, daemon=True)
    t.start()
    t.join(timeout_ms / 1000)
    if t.is_alive():
        return HandlerOutcome(error_kind="Timeout",
                              detail=f"handler exceeded {timeout_ms}ms")
    if "error" in box:
        exc = box["error"]
        if isinstance(exc, BadQuery):
            return HandlerOutcome(error_kind="BadQuery", detail=str(exc))
        if isinstance(exc, HandlerTimeout):
            return HandlerOutcome(error_kind="Timeout", detail=str(exc))
        if isinstance(exc, HandlerFailure):
            return HandlerOutcome(error_kind="HandlerFailure", detail=str(exc))
        return HandlerOutcome(error_kind="Fault", detail=f"{type(exc).__name__}: {exc}")
    return HandlerOutcome(results=box["results"])


def serve_static(path: str, static_root: str | Path) -> HttpResponse:
    """Resolve a decoded, traversal-free path under static_root."""
    root = Path(static_root)
    relative = path.lstrip("/") or "index.html"
    target = root / relative
    try:
        target.resolve().relative_to(root.resolve())
    except ValueError:
        return _error_response(404, "not found")
    if not target.is_file():
        return _error_response(404, "not found")
    content_type = CONTENT_TYPES.get(target.suffix.lower(), "application/octet-stream")
    return HttpResponse(200, "OK", [("Content-Type", content_type)],
                        target.read_bytes())


def dispatch(request: HttpRequest, routes: list[Route],
             static_root: str | Path | None,
             timeout_ms: int = 2000) -> HttpResponse:
    """Route one parsed request and map the outcome to a response.

    Every response (success or error) carries CORS and Content-Length
    headers; handler faults become 5xx, never an unanswered connection.
    """
    by_path: dict[str, dict[str, Route]] = {}
    for route in routes:
        by_path.setdefault(route.path, {})[route.method] = route

    methods = by_path.get(request.target_path)
    if methods is not None:
        route = methods.get(request.method)
        if route is None:
            resp = _error_response(405, "method not allowed")
            resp.set_header("Allow", ", ".join(sorted(methods)))
        else:
            params = parse_query_string(request.raw_query)
            outcome = _call_with_timeout(route.handler, params, timeout_ms)
            if outcome.results is not None:
                page = ResultPage(params.first("q", ""), outcome.results)
                resp = HttpResponse(
                    200, "OK",
                    [("Content-Type", "application/json; charset=utf-8")],
                    encode_page(page).encode("utf-8"))
            else:
                status = {"BadQuery": 400, "HandlerFailure": 502,
                          "Timeout": 504, "Fault": 500}[outcome.error_kind]
                resp = _error_response(status, outcome.detail or outcome.error_kind)
    elif request.method != "GET":
        resp = _error_response(405, "method not allowed")
        resp.set_header("Allow", "GET")
    elif static_root is not None:
        resp = serve_static(request.target_path, static_root)
    else:
        resp = _error_response(404, "not found")

    resp.set_header("Access-Control-Allow-Origin", "*")
    resp.set_header("Connection", "close")
    return resp


def _read_request_bytes(conn: socket.socket) -> bytes:
    """Read one request head plus Content-Length body from the socket."""
    data = b""
    while b"\r\n\r\n" not in data:
        if len(data) > MAX_HEAD_BYTES:
            return data
        chunk = conn.recv(8192)
        if not chunk:
            return data
        data += chunk
    head_end = data.find(b"\r\n\r\n")
    head = data[:head_end].decode("iso-8859-1", "replace")
    length = 0
    for line in head.split("\r\n")[1:]:
        name, sep, value = line.partition(":")
        if sep and name.strip().lower() == "content-length":
            value = value.strip()
            if value.isdigit():
                length = min(int(value), MAX_BODY_BYTES)
    needed = head_end + 4 + length
    while len(data) < needed:
        chunk = conn.recv(8192)
        if not chunk:
            break
        data += chunk
    return data


class AppServer:
    """Listen, accept, dispatch; one worker per connection from a bounded pool."""

    def __init__(self, host: str, port: int, routes: list[Route],
                 static_root: str | Path | None = None,
                 timeout_ms: int = 2000, workers: int = 16):
        self.host = host
        self.port = port
        self.routes = routes
        self.static_root = static_root
        self.timeout_ms = timeout_ms
        self.workers = workers
        self._sock: socket.socket | None = None
        self._pool: ThreadPoolExecutor | None = None
        self._accept_thread: threading.Thread | None = None
        self._closing = threading.Event()

    def start(self) -> "AppServer":
        """Bind and start accepting in the background; self.port is the bound port."""
        sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            sock.bind((self.host, self.port))
        except OSError as exc:
            sock.close()
            raise OSError(
                f"cannot bind {self.host}:{self.port}: {exc.strerror or exc}") from exc
        sock.listen(128)
        self.port = sock.getsockname()[1]
        self._sock = sock
        self._pool = ThreadPoolExecutor(max_workers=self.workers)
        self._accept_thread = threading.Thread(target=self._accept_loop, daemon=True)
        self._accept_thread.start()
        return self

    def serve_forever(self) -> None:
        if self._sock is None:
            self.start()
        self._accept_thread.join()

    def shutdown(self) -> None:
        self._closing.set()
        if self._sock is not None:
            self._sock.close()
        if self._pool is not None:
            self._pool.shutdown(wait=False, cancel_futures=True)
        if self._accept_thread is not None:
            self._accept_thread.join(timeout=2)

    def _accept_loop(self) -> None:
        while not self._closing.is_set():
            try:
                conn, _addr = self._sock.accept()
            except OSError:
                break  # listening socket closed
            self._pool.submit(self._handle_connection, conn)

    def _handle_connection(self, conn: socket.socket) -> None:
        started = time.monotonic()
        method = path = "-"
        status = 0
        try:
            with conn:
                conn.settimeout(10)
                raw = _read_request_bytes(conn)
                if not raw:
                    return
                try:
                    request = parse_request(raw)
                    method, path = request.method, request.target_path
                    resp = dispatch(request, self.routes, self.static_root,
                                    self.timeout_ms)
                except MalformedRequest as exc:
                    resp = _error_response(exc.status, str(exc))
                    resp.set_header("Access-Control-Allow-Origin", "*")
                    resp.set_header("Connection", "close")
                except Exception as exc:  # dispatch already shields handlers
                    resp = _error_response(500, f"{type(exc).__name__}")
                    resp.set_header("Access-Control-Allow-Origin", "*")
                    resp.set_header("Connection", "close")
                status = resp.status
                conn.sendall(serialize_response(resp))
        except OSError as exc:
            print(f"connection error: {exc}", file=sys.stderr, flush=True)
        finally:
            millis = int((time.monotonic() - started) * 1000)
            print(f"{method} {path} {status} {millis}ms", file=sys.stderr, flush=True)
