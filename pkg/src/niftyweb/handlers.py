"""Query handlers: the built-in kernels and the wrapped-program handler.

Every handler takes decoded query parameters and returns a ranked list
of results; bad parameters raise BadQuery.  The shared parameters are
q (query text), max (result count), and seed (RSG determinism).
"""

from __future__ import annotations

import time
from typing import Callable

from . import adapter, autocomplete, grammar as grammar_mod
from .errors import BadQuery, HandlerFailure
from .grammar import DepthExceeded, Grammar
from .http1 import QueryParams
from .letters import make_inventory
from .results import DEFAULT_LINK_TEMPLATE, QueryResult, map_link

Kernel = Callable[[QueryParams], list[QueryResult]]

_UINT64_MAX = (1 << 64) - 1


def _query_text(params: QueryParams) -> str:
    return params.first("q", "")


def _max_results(params: QueryParams, default: int) -> int:
    raw = params.first("max")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise BadQuery(f"max must be an integer, got {raw!r}") from None
    if value < 1:
        raise BadQuery("max must be >= 1")
    return value


def _seed(params: QueryParams, seedless: bool) -> int | None:
    raw = params.first("seed")
    if raw is None:
        return None
    if seedless:
        raise BadQuery("seed parameter is disabled on this server")
    try:
        value = int(raw)
    except ValueError:
        raise BadQuery(f"seed must be an integer, got {raw!r}") from None
    if not 0 <= value <= _UINT64_MAX:
        raise BadQuery("seed must fit in 64 bits")
    return value


def autocomplete_handler(index: autocomplete.TermIndex,
                         default_k: int = 5,
                         link_template: str = DEFAULT_LINK_TEMPLATE) -> Kernel:
    """Weighted prefix search; labels deep-link to the map service."""

    def handle(params: QueryParams) -> list[QueryResult]:
        query = _query_text(params)
        k = _max_results(params, default_k)
        if not query:
            return []  # a page should not dump the whole dataset on load
        return [
            QueryResult(t.weight, t.text, map_link(t.text, link_template))
            for t in autocomplete.top_matches(index, query, k)
        ]

    return handle


def letters_handler() -> Kernel:
    """Canonical inventory string, then one "letter: count" row per nonzero letter."""

    def handle(params: QueryParams) -> list[QueryResult]:
        inv = make_inventory(_query_text(params))
        results = [QueryResult(0, str(inv))]
        for i, count in enumerate(inv.counts):
            if count:
                results.append(QueryResult(0, f"{chr(ord('a') + i)}: {count}"))
        return results

    return handle


def rsg_handler(grammar: Grammar, default_n: int = 5,
                max_depth: int = grammar_mod.DEFAULT_MAX_DEPTH,
                seedless: bool = False) -> Kernel:
    """Random sentences from the start nonterminal named by the query.

    Empty query means "<s>"; a bare name is wrapped in angle brackets.
    Without an explicit seed, one is drawn from the clock per request.
    """

    def handle(params: QueryParams) -> list[QueryResult]:
        query = _query_text(params)
        start = query or "<s>"
        if not start.startswith("<"):
            start = f"<{start}>"
        if start not in grammar.rules:
            raise BadQuery(f"unknown nonterminal {start}")
        n = _max_results(params, default_n)
        seed = _seed(params, seedless)
        if seed is None:
            seed = time.time_ns() & _UINT64_MAX
        rng = grammar_mod.SplitMix64(seed)
        try:
            return [
                QueryResult(0, grammar_mod.expand(grammar, start, rng, max_depth))
                for _ in range(n)
            ]
        except DepthExceeded as exc:
            raise HandlerFailure(str(exc)) from None

    return handle


def program_handler(spec: adapter.ProgramSpec) -> Kernel:
    """Delegate the query to a wrapped console program."""
    if spec.mode == "session":
        runner = adapter.SessionRunner(spec)

        def handle(params: QueryParams) -> list[QueryResult]:
            return runner.query(_query_text(params))

        handle.runner = runner  # exposed for lifecycle control in tests
        return handle

    def handle(params: QueryParams) -> list[QueryResult]:
        return adapter.run_oneshot(spec, _query_text(params))

    return handle
