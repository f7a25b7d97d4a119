"""Wire schema for ranked results and the external-service link binding.

The JSON emitted here is the one contract between every kernel and the
frontend: {"query": ..., "results": [{"weight", "label", "link"?}...]}.
The emitter is hand-rolled so tests can validate it with the stdlib JSON
parser as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .http1 import percent_encode

DEFAULT_LINK_TEMPLATE = "https://www.google.com/maps/search/?api=1&query={query}"

_ESCAPES = {'"': '\\"', "\\": "\\\\", "\b": "\\b", "\f": "\\f",
            "\n": "\\n", "\r": "\\r", "\t": "\\t"}


@dataclass
class QueryResult:
    weight: int            # relevance count; 0 when the kernel has no weights
    label: str
    link: str | None = None  # absolute https URL when present


@dataclass
class ResultPage:
    query: str
    results: list[QueryResult] = field(default_factory=list)


def _json_string(text: str) -> str:
    out = ['"']
    for ch in text:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def encode_page(page: ResultPage) -> str:
    """Serialize a result page to JSON with fixed key order, UTF-8 text."""
    rows = []
    for r in page.results:
        fields = [f'"weight":{int(r.weight)}', f'"label":{_json_string(r.label)}']
        if r.link is not None:
            fields.append(f'"link":{_json_string(r.link)}')
        rows.append("{" + ",".join(fields) + "}")
    return f'{{"query":{_json_string(page.query)},"results":[{",".join(rows)}]}}'


def map_link(label: str, template: str = DEFAULT_LINK_TEMPLATE) -> str:
    """Bind a result label to an external map search URL.

    The template's "{query}" placeholder receives the percent-encoded
    label; decoding the query parameter recovers the label exactly.
    """
    return template.replace("{query}", percent_encode(label))
