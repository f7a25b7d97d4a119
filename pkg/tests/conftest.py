import socket
from pathlib import Path

import pytest

from niftyweb.server import AppServer

REPO_ROOT = Path(__file__).resolve().parent.parent
CITIES_TSV = REPO_ROOT / "src" / "niftyweb" / "data" / "cities.tsv"
SAMPLE_GRAMMAR = REPO_ROOT / "src" / "niftyweb" / "data" / "sample.grammar"
CONSOLE_AUTOCOMPLETE = REPO_ROOT / "tools" / "console_autocomplete.py"


def http_exchange(port: int, raw: bytes, host: str = "127.0.0.1",
                  timeout: float = 10.0) -> bytes:
    """Send raw bytes over a fresh TCP connection and read until close."""
    with socket.create_connection((host, port), timeout=timeout) as conn:
        conn.sendall(raw)
        conn.shutdown(socket.SHUT_WR)  # EOF so truncated heads fail fast
        chunks = []
        while True:
            chunk = conn.recv(65536)
            if not chunk:
                break
            chunks.append(chunk)
    return b"".join(chunks)


def http_get(port: int, target: str) -> bytes:
    return http_exchange(
        port, f"GET {target} HTTP/1.1\r\nHost: test\r\n\r\n".encode())


@pytest.fixture
def run_server():
    """Start AppServers on ephemeral ports and tear them down after the test."""
    servers = []

    def start(routes, **kwargs):
        server = AppServer("127.0.0.1", 0, routes, **kwargs).start()
        servers.append(server)
        return server

    yield start
    for server in servers:
        server.shutdown()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    lines = []
    for outcome, word in (("passed", "PASS"), ("failed", "FAIL")):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", None) == "call" and \
                    "test_acceptance.py" in rep.nodeid:
                name = rep.nodeid.split("::")[-1].removeprefix("test_")
                lines.append(f"ACCEPTANCE {name.replace('_', '-')}: {word}")
    if lines:
        terminalreporter.write_line("")
        for line in sorted(lines):
            terminalreporter.write_line(line)
