"""Weighted prefix search over a sorted term list.

Terms are kept sorted by case-folded text so a prefix maps to one
contiguous slice, located by binary search; the best k of that slice are
picked with a bounded heap rather than sorting the whole range.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from pathlib import Path


class FormatError(ValueError):
    """Bad TSV line; line_no is 1-based."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def fold(text: str) -> str:
    """Simple per-character lowercase fold used for matching and ordering."""
    return "".join(ch.lower() for ch in text)


@dataclass(frozen=True)
class Term:
    weight: int
    text: str


class TermIndex:
    """Immutable after construction; safe for concurrent reads."""

    def __init__(self, terms: list[Term]):
        self.terms = sorted(terms, key=lambda t: (fold(t.text), t.text))
        self._folded = [fold(t.text) for t in self.terms]
        assert all(self._folded[i] <= self._folded[i + 1]
                   for i in range(len(self._folded) - 1))

    def __len__(self) -> int:
        return len(self.terms)


def load_terms(tsv: str) -> TermIndex:
    """Build an index from "weight<TAB>label" lines."""
    terms = []
    for line_no, line in enumerate(tsv.split("\n"), start=1):
        if not line.strip():
            continue
        weight_text, sep, label = line.partition("\t")
        if not sep:
            raise FormatError(line_no, "missing tab separator")
        try:
            weight = int(weight_text.strip())
        except ValueError:
            raise FormatError(line_no, f"non-integer weight {weight_text!r}") from None
        if weight < 0:
            raise FormatError(line_no, f"negative weight {weight}")
        label = label.strip()
        if not label:
            raise FormatError(line_no, "empty label")
        terms.append(Term(weight, label))
    return TermIndex(terms)


def load_terms_file(path: str | Path) -> TermIndex:
    return load_terms(Path(path).read_text(encoding="utf-8"))


def match_range(index: TermIndex, prefix: str) -> tuple[int, int]:
    """Half-open range of terms whose folded text starts with the folded prefix."""
    folded = index._folded
    needle = fold(prefix)
    n = len(folded)

    # first index with folded[i] >= needle
    lo, hi = 0, n
    while lo < hi:
        mid = (lo + hi) // 2
        if folded[mid] < needle:
            lo = mid + 1
        else:
            hi = mid
    start = lo

    # first index >= start where the prefix no longer matches
    lo, hi = start, n
    while lo < hi:
        mid = (lo + hi) // 2
        if folded[mid].startswith(needle):
            lo = mid + 1
        else:
            hi = mid
    return start, lo


def top_matches(index: TermIndex, prefix: str, k: int) -> list[Term]:
    """The k best matching terms, weight descending, ties by folded then raw text."""
    if k < 1:
        raise ValueError("k must be >= 1")
    lo, hi = match_range(index, prefix)
    terms, folded = index.terms, index._folded
    best = heapq.nsmallest(
        k, range(lo, hi),
        key=lambda i: (-terms[i].weight, folded[i], terms[i].text))
    return [terms[i] for i in best]
