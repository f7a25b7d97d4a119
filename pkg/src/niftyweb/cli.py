"""Command-line entry point: `niftyweb serve ...`.

Flags beat the HOST/PORT environment variables, which beat built-in
defaults.  Data files load eagerly so a bad path fails before the port
is bound.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field

from . import autocomplete, grammar as grammar_mod, handlers
from .adapter import ProgramSpec
from .results import DEFAULT_LINK_TEMPLATE
from .server import AppServer, Route

HANDLERS = ("autocomplete", "letters", "rsg", "program")


@dataclass
class AppConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    handler: str = "autocomplete"
    data_path: str | None = None
    program_argv: list[str] = field(default_factory=list)
    program_mode: str = "oneshot"
    static_root: str = "web"
    max_results: int = 5
    timeout_ms: int = 2000
    seedless: bool = False
    link_template: str = DEFAULT_LINK_TEMPLATE


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="niftyweb",
        description="Serve a text-based program as a simple web app.")
    sub = parser.add_subparsers(dest="command", required=True)
    serve = sub.add_parser("serve", help="run the query server")
    serve.add_argument("--host", default=None, help="bind address (default 127.0.0.1)")
    serve.add_argument("--port", type=int, default=None, help="TCP port (default 8080)")
    serve.add_argument("--handler", choices=HANDLERS, default="autocomplete")
    serve.add_argument("--data", default=None,
                       help="TSV term file (autocomplete) or grammar file (rsg)")
    serve.add_argument("--cmd", action="append", default=[],
                       help="wrapped program argv, one token per flag (repeatable)")
    serve.add_argument("--mode", choices=("oneshot", "session"), default="oneshot")
    serve.add_argument("--static", default="web", help="static file root")
    serve.add_argument("--max-results", type=int, default=5)
    serve.add_argument("--timeout-ms", type=int, default=2000)
    serve.add_argument("--seedless", action="store_true",
                       help="reject the seed query parameter")
    serve.add_argument("--link-template", default=DEFAULT_LINK_TEMPLATE,
                       help='result link template containing "{query}"')
    return parser


def parse_args(argv: list[str]) -> AppConfig:
    """Pure argv -> config, honoring flag > environment > default.

    Raises UsageError (after argparse's own exits for unknown flags and
    bad numbers) when a config invariant is violated.
    """
    ns = build_parser().parse_args(argv)

    host = ns.host if ns.host is not None else os.environ.get("HOST", "127.0.0.1")
    if ns.port is not None:
        port = ns.port
    else:
        env_port = os.environ.get("PORT")
        if env_port is not None and not env_port.isdigit():
            raise UsageError(f"PORT must be numeric, got {env_port!r}")
        port = int(env_port) if env_port else 8080

    config = AppConfig(
        host=host, port=port, handler=ns.handler, data_path=ns.data,
        program_argv=list(ns.cmd), program_mode=ns.mode, static_root=ns.static,
        max_results=ns.max_results, timeout_ms=ns.timeout_ms,
        seedless=ns.seedless, link_template=ns.link_template,
    )
    # port 0 is the documented escape hatch for an OS-assigned ephemeral port
    if not 0 <= config.port <= 65535:
        raise UsageError(f"port must be in 0..65535, got {config.port}")
    if config.max_results < 1:
        raise UsageError("--max-results must be >= 1")
    if config.timeout_ms < 1:
        raise UsageError("--timeout-ms must be >= 1")
    if config.handler in ("autocomplete", "rsg") and not config.data_path:
        raise UsageError(f"--handler {config.handler} requires --data")
    if config.handler == "program" and not config.program_argv:
        raise UsageError("--handler program requires at least one --cmd token")
    if "{query}" not in config.link_template:
        raise UsageError('--link-template must contain "{query}"')
    return config


def build_handler(config: AppConfig) -> handlers.Kernel:
    """Construct the configured kernel, loading data files eagerly."""
    if config.handler == "autocomplete":
        index = autocomplete.load_terms_file(config.data_path)
        return handlers.autocomplete_handler(index, config.max_results,
                                             config.link_template)
    if config.handler == "letters":
        return handlers.letters_handler()
    if config.handler == "rsg":
        grammar = grammar_mod.load_grammar_file(config.data_path)
        return handlers.rsg_handler(grammar, config.max_results,
                                    seedless=config.seedless)
    spec = ProgramSpec(argv=config.program_argv, mode=config.program_mode,
                       timeout_ms=config.timeout_ms)
    return handlers.program_handler(spec)


def make_server(config: AppConfig) -> AppServer:
    handler = build_handler(config)
    static = config.static_root if os.path.isdir(config.static_root) else None
    return AppServer(config.host, config.port, [Route("GET", "/query", handler)],
                     static_root=static, timeout_ms=config.timeout_ms)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_args(argv)
    except UsageError as exc:
        print(f"niftyweb: {exc}", file=sys.stderr)
        return 1
    try:
        server = make_server(config)
        server.start()
    except (OSError, ValueError) as exc:
        print(f"niftyweb: {exc}", file=sys.stderr)
        return 1
    print(f"serving {config.handler} on http://{config.host}:{server.port}/",
          flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
