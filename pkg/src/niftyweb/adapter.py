"""Wrap an existing console program as a query handler.

Oneshot mode spawns the program per request, substituting "{query}" in
its argv (or appending the query when no placeholder is present).
Session mode keeps one child alive and exchanges line-delimited blocks:
one query line in, result lines out, terminated by a single blank line.

Output lines become results: a leading integer followed by whitespace is
the weight (the classic "608660 Seattle, ..." console shape), otherwise
the whole line is the label with weight 0.
"""

from __future__ import annotations

import os
import re
import subprocess
import threading
from dataclasses import dataclass, field

from .errors import HandlerFailure, HandlerTimeout, SpawnError
from .results import QueryResult

_WEIGHTED_LINE_RE = re.compile(r"^\s*(\d+)\s+(.*)$")


@dataclass
class ProgramSpec:
    argv: list[str]
    mode: str = "oneshot"          # oneshot | session
    timeout_ms: int = 2000
    workdir: str | None = None

    def __post_init__(self):
        if not self.argv or not self.argv[0]:
            raise ValueError("argv must start with a command")
        if self.mode not in ("oneshot", "session"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.timeout_ms < 1:
            raise ValueError("timeout_ms must be >= 1")


def parse_result_lines(stdout_text: str) -> list[QueryResult]:
    results = []
    for line in stdout_text.split("\n"):
        if not line.strip():
            continue
        m = _WEIGHTED_LINE_RE.match(line)
        if m and m.group(2).strip():
            results.append(QueryResult(int(m.group(1)), m.group(2).strip()))
        else:
            results.append(QueryResult(0, line.strip()))
    return results


def _substituted_argv(argv: list[str], query: str) -> list[str]:
    if any("{query}" in arg for arg in argv):
        return [arg.replace("{query}", query) for arg in argv]
    return argv + [query]


def _child_env(query: str) -> dict[str, str]:
    env = dict(os.environ)
    env["NIFTY_QUERY"] = query
    return env


def run_oneshot(spec: ProgramSpec, query: str) -> list[QueryResult]:
    """Spawn the program once for this query and parse its stdout."""
    argv = _substituted_argv(spec.argv, query)
    try:
        proc = subprocess.run(
            argv,
            capture_output=True,
            timeout=spec.timeout_ms / 1000,
            cwd=spec.workdir,
            env=_child_env(query),
        )
    except subprocess.TimeoutExpired:
        raise HandlerTimeout(f"{argv[0]} exceeded {spec.timeout_ms}ms") from None
    except OSError as exc:
        raise SpawnError(f"cannot start {argv[0]}: {exc}") from None
    if proc.returncode != 0:
        stderr = proc.stderr.decode("utf-8", "replace").strip()
        raise HandlerFailure(
            f"{argv[0]} exited {proc.returncode}: {stderr[:500]}")
    return parse_result_lines(proc.stdout.decode("utf-8", "replace"))


class SessionRunner:
    """One persistent child per handler; queries are serialized behind a lock.

    The child is started lazily, killed on timeout or protocol failure,
    and restarted on the next request (self-healing).
    """

    def __init__(self, spec: ProgramSpec):
        if spec.mode != "session":
            raise ValueError("SessionRunner requires session mode")
        self.spec = spec
        self._lock = threading.Lock()
        self._proc: subprocess.Popen | None = None

    def _ensure_child(self) -> subprocess.Popen:
        if self._proc is None or self._proc.poll() is not None:
            try:
                self._proc = subprocess.Popen(
                    self.spec.argv,
                    stdin=subprocess.PIPE,
                    stdout=subprocess.PIPE,
                    stderr=None,  # inherit: diagnostics go to the server log
                    cwd=self.spec.workdir,
                    env=_child_env(""),
                    text=True,
                    bufsize=1,
                )
            except OSError as exc:
                raise SpawnError(f"cannot start {self.spec.argv[0]}: {exc}") from None
        return self._proc

    def _kill_child(self) -> None:
        if self._proc is not None:
            self._proc.kill()
            self._proc.wait()
            self._proc = None

    def query(self, query: str) -> list[QueryResult]:
        with self._lock:
            proc = self._ensure_child()
            try:
                proc.stdin.write(query + "\n")
                proc.stdin.flush()
            except (BrokenPipeError, OSError):
                self._kill_child()
                raise HandlerFailure("session child closed its input") from None

            lines: list[str] = []
            done = threading.Event()
            failure: list[str] = []

            def reader():
                while True:
                    line = proc.stdout.readline()
                    if line == "":
                        failure.append("child exited mid-answer")
                        break
                    if line.strip("\r\n") == "":
                        break  # blank-line sentinel ends the answer block
                    lines.append(line.rstrip("\r\n"))
                done.set()

            t = threading.Thread(target=reader, daemon=True)
            t.start()
            if not done.wait(self.spec.timeout_ms / 1000):
                self._kill_child()
                raise HandlerTimeout(
                    f"session child exceeded {self.spec.timeout_ms}ms")
            if failure:
                self._kill_child()
                raise HandlerFailure(failure[0])
            return parse_result_lines("\n".join(lines))

    def child_pid(self) -> int | None:
        """PID of the live child, if any (used by tests to observe reuse)."""
        return self._proc.pid if self._proc is not None else None

    def close(self) -> None:
        with self._lock:
            self._kill_child()
