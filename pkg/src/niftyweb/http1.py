"""HTTP/1.1 message parsing and serialization over raw bytes.

Pure functions, no sockets.  One request per connection; the server layer
adds "Connection: close".  Limits: 16 KiB request head, 1 MiB body.
Chunked transfer encoding is not supported.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from urllib.parse import quote

MAX_HEAD_BYTES = 16 * 1024
MAX_BODY_BYTES = 1024 * 1024

_TOKEN_RE = re.compile(r"^[!#$%&'*+\-.^_`|~0-9A-Za-z]+$")
_HEX = "0123456789abcdefABCDEF"


class MalformedRequest(ValueError):
    """Unparseable or unacceptable request; carries the status to answer with."""

    def __init__(self, message: str, status: int = 400):
        super().__init__(message)
        self.status = status


class InvalidEscape(ValueError):
    """Truncated or non-hex percent escape."""


class InvalidUtf8(ValueError):
    """Percent-decoded bytes are not valid UTF-8."""


@dataclass
class HttpRequest:
    method: str
    target_path: str      # percent-decoded
    raw_query: str        # text after the first "?", not decoded
    version: str
    headers: list[tuple[str, str]]
    body: bytes

    def header(self, name: str, default: str | None = None) -> str | None:
        wanted = name.lower()
        for key, value in self.headers:
            if key.lower() == wanted:
                return value
        return default


@dataclass
class HttpResponse:
    status: int
    reason: str
    headers: list[tuple[str, str]] = field(default_factory=list)
    body: bytes = b""

    def header(self, name: str, default: str | None = None) -> str | None:
        wanted = name.lower()
        for key, value in self.headers:
            if key.lower() == wanted:
                return value
        return default

    def set_header(self, name: str, value: str) -> None:
        wanted = name.lower()
        self.headers = [(k, v) for k, v in self.headers if k.lower() != wanted]
        self.headers.append((name, value))


@dataclass
class QueryParams:
    """Ordered multi-map of decoded query keys/values."""

    entries: list[tuple[str, str]] = field(default_factory=list)
    dropped: list[str] = field(default_factory=list)  # pairs that failed decoding

    def first(self, key: str, default: str | None = None) -> str | None:
        for k, v in self.entries:
            if k == key:
                return v
        return default

    def all(self, key: str) -> list[str]:
        return [v for k, v in self.entries if k == key]


def percent_decode(text: str, plus_as_space: bool = False) -> str:
    """Decode %HH escapes (and optionally "+" as space) into UTF-8 text."""
    out = bytearray()
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "%":
            if i + 2 >= n:
                raise InvalidEscape(f"truncated escape at offset {i}")
            hi, lo = text[i + 1], text[i + 2]
            if hi not in _HEX or lo not in _HEX:
                raise InvalidEscape(f"non-hex escape %{hi}{lo} at offset {i}")
            out.append(int(hi + lo, 16))
            i += 3
        elif ch == "+" and plus_as_space:
            out.append(0x20)
            i += 1
        else:
            out.extend(ch.encode("utf-8"))
            i += 1
    try:
        return out.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InvalidUtf8(str(exc)) from None


def percent_encode(text: str) -> str:
    """Escape every byte outside the unreserved set; spaces become %20."""
    return quote(text, safe="")


def parse_query_string(raw_query: str) -> QueryParams:
    """Split form-encoded query text into decoded key/value pairs.

    A pair whose key or value fails to decode is dropped and recorded,
    never fatal.
    """
    params = QueryParams()
    if not raw_query:
        return params
    for pair in raw_query.split("&"):
        if not pair:
            continue
        key, sep, value = pair.partition("=")
        try:
            params.entries.append(
                (percent_decode(key, plus_as_space=True),
                 percent_decode(value, plus_as_space=True))
            )
        except (InvalidEscape, InvalidUtf8):
            params.dropped.append(pair)
    return params


def _has_dotdot(path: str) -> bool:
    return ".." in path.split("/")


def parse_request(raw: bytes) -> HttpRequest:
    """Parse one complete HTTP/1.1 request from raw bytes.

    Raises MalformedRequest for anything unacceptable; the attached
    status (400 / 413 / 501) is what the server answers with.
    """
    head_end = raw.find(b"\r\n\r\n")
    if head_end >= 0 and head_end + 4 > MAX_HEAD_BYTES:
        raise MalformedRequest("request head too large", status=413)
    if head_end < 0:
        if len(raw) > MAX_HEAD_BYTES:
            raise MalformedRequest("request head too large", status=413)
        raise MalformedRequest("incomplete request head")
    head = raw[:head_end]
    try:
        lines = head.decode("iso-8859-1").split("\r\n")
    except UnicodeDecodeError:  # iso-8859-1 never fails; keep the guard anyway
        raise MalformedRequest("undecodable head")

    parts = lines[0].split(" ")
    if len(parts) != 3 or not all(parts):
        raise MalformedRequest(f"bad request line: {lines[0]!r}")
    method, target, version = parts
    if not _TOKEN_RE.match(method):
        raise MalformedRequest(f"bad method: {method!r}")
    if version != "HTTP/1.1":
        raise MalformedRequest(f"unsupported version: {version!r}")
    if not target.startswith("/"):
        raise MalformedRequest(f"bad target: {target!r}")

    raw_path, _, raw_query = target.partition("?")
    try:
        target_path = percent_decode(raw_path)
    except (InvalidEscape, InvalidUtf8) as exc:
        raise MalformedRequest(f"bad path encoding: {exc}") from None
    if _has_dotdot(target_path):
        raise MalformedRequest("path traversal rejected")

    headers: list[tuple[str, str]] = []
    for line in lines[1:]:
        if line[:1] in (" ", "\t"):
            raise MalformedRequest("obsolete header folding rejected")
        name, sep, value = line.partition(":")
        if not sep or not _TOKEN_RE.match(name):
            raise MalformedRequest(f"bad header line: {line!r}")
        headers.append((name, value.strip(" \t")))

    request = HttpRequest(method, target_path, raw_query, version, headers, b"")

    te = request.header("Transfer-Encoding")
    if te is not None:
        raise MalformedRequest("transfer encodings not implemented", status=501)

    lengths = {v for k, v in headers if k.lower() == "content-length"}
    if len(lengths) > 1:
        raise MalformedRequest("conflicting Content-Length headers")
    if lengths:
        text = lengths.pop()
        if not text.isdigit():
            raise MalformedRequest(f"invalid Content-Length: {text!r}")
        length = int(text)
        if length > MAX_BODY_BYTES:
            raise MalformedRequest("body too large", status=413)
        body = raw[head_end + 4 : head_end + 4 + length]
        if len(body) < length:
            raise MalformedRequest("truncated body")
        request.body = body
    return request


def serialize_response(resp: HttpResponse) -> bytes:
    """Emit status line, headers (Content-Length added if absent), blank line, body."""
    if not 100 <= resp.status <= 599:
        raise ValueError(f"status out of range: {resp.status}")
    out = [f"HTTP/1.1 {resp.status} {resp.reason}\r\n".encode("iso-8859-1")]
    has_length = False
    for name, value in resp.headers:
        if any(c in "\r\n" for c in value) or not _TOKEN_RE.match(name):
            raise ValueError(f"illegal header {name!r}: {value!r}")
        if name.lower() == "content-length":
            has_length = True
        out.append(f"{name}: {value}\r\n".encode("iso-8859-1"))
    if not has_length:
        out.append(f"Content-Length: {len(resp.body)}\r\n".encode("iso-8859-1"))
    out.append(b"\r\n")
    out.append(resp.body)
    return b"".join(out)


def parse_response(raw: bytes) -> HttpResponse:
    """Parse a serialized response back into a structured message (round-trip aid)."""
    head_end = raw.find(b"\r\n\r\n")
    if head_end < 0:
        raise ValueError("incomplete response head")
    lines = raw[:head_end].decode("iso-8859-1").split("\r\n")
    version, _, rest = lines[0].partition(" ")
    status_text, _, reason = rest.partition(" ")
    if version != "HTTP/1.1" or not status_text.isdigit():
        raise ValueError(f"bad status line: {lines[0]!r}")
    headers = []
    for line in lines[1:]:
        name, sep, value = line.partition(":")
        if not sep:
            raise ValueError(f"bad header line: {line!r}")
        headers.append((name, value.strip(" \t")))
    resp = HttpResponse(int(status_text), reason, headers, raw[head_end + 4 :])
    length = resp.header("Content-Length")
    if length is not None and length.isdigit():
        resp.body = resp.body[: int(length)]
    return resp
