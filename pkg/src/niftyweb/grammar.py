"""Context-free grammar parsing and seeded random sentence expansion.

Grammar files are line-oriented: one rule per line,

    <name> ::= production ( | production )*

Tokens are whitespace-separated; tokens of the form <name> are
nonterminal references, everything else is a terminal.  "#" starts a
comment line, blank lines are ignored.  Duplicate rule names merge their
production lists in file order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .rng import SplitMix64

NONTERMINAL_RE = re.compile(r"^<[^<>\s]+>$")
DEFAULT_MAX_DEPTH = 100


class GrammarFormatError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class OpenGrammarError(ValueError):
    """Some referenced nonterminals have no rule."""

    def __init__(self, undefined: list[str]):
        super().__init__(f"undefined nonterminals: {', '.join(undefined)}")
        self.undefined = undefined


class DepthExceeded(RuntimeError):
    """Expansion nested past max_depth; the grammar likely recurses unboundedly."""


@dataclass
class Grammar:
    rules: dict[str, list[list[str]]]  # nonterminal -> productions -> symbols

    def terminals(self) -> set[str]:
        out = set()
        for productions in self.rules.values():
            for production in productions:
                out.update(s for s in production if not NONTERMINAL_RE.match(s))
        return out


def parse_grammar(text: str) -> Grammar:
    rules: dict[str, list[list[str]]] = {}
    for line_no, line in enumerate(text.split("\n"), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lhs, sep, rhs = stripped.partition("::=")
        if not sep:
            raise GrammarFormatError(line_no, 'missing "::="')
        name = lhs.strip()
        if not NONTERMINAL_RE.match(name):
            raise GrammarFormatError(line_no, f"bad rule name {name!r}")
        productions = []
        for alt in rhs.split("|"):
            symbols = alt.split()
            if not symbols:
                raise GrammarFormatError(line_no, "empty production")
            productions.append(symbols)
        rules.setdefault(name, []).extend(productions)

    undefined = sorted({
        symbol
        for productions in rules.values()
        for production in productions
        for symbol in production
        if NONTERMINAL_RE.match(symbol) and symbol not in rules
    })
    if undefined:
        raise OpenGrammarError(undefined)
    return Grammar(rules)


def load_grammar_file(path: str | Path) -> Grammar:
    return parse_grammar(Path(path).read_text(encoding="utf-8"))


def expand(grammar: Grammar, start: str, rng: SplitMix64,
           max_depth: int = DEFAULT_MAX_DEPTH) -> str:
    """Leftmost depth-first expansion of one sentence.

    At each nonterminal with m productions the next RNG output mod m
    picks the branch, so a seed fully determines the sentence.
    """
    if start not in grammar.rules:
        raise KeyError(f"no rule for {start!r}")

    words: list[str] = []

    def walk(symbol: str, depth: int) -> None:
        if not NONTERMINAL_RE.match(symbol):
            words.append(symbol)
            return
        if depth > max_depth:
            raise DepthExceeded(f"expansion of {symbol!r} nested past {max_depth}")
        productions = grammar.rules[symbol]
        chosen = productions[rng.below(len(productions))]
        for child in chosen:
            walk(child, depth + 1)

    walk(start, 0)
    return " ".join(words)


def generate(grammar: Grammar, start: str, n: int, seed: int) -> list[str]:
    """n sentences from one generator seeded once; pure in (grammar, start, n, seed)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = SplitMix64(seed)
    sentences = []
    for i in range(n):
        try:
            sentences.append(expand(grammar, start, rng))
        except DepthExceeded as exc:
            raise DepthExceeded(f"sentence {i}: {exc}") from None
    return sentences
