"""Letter inventory: a 26-slot count vector over ASCII letters."""

from __future__ import annotations

import string


class LetterInventory:
    """Counts of a-z in a text, case-insensitive; everything else ignored."""

    __slots__ = ("counts",)

    def __init__(self, text: str = "", counts: tuple[int, ...] | None = None):
        if counts is not None:
            if len(counts) != 26 or any(c < 0 for c in counts):
                raise ValueError("counts must be 26 nonnegative integers")
            self.counts = tuple(counts)
        else:
            slots = [0] * 26
            for ch in text:
                if "a" <= ch <= "z":
                    slots[ord(ch) - ord("a")] += 1
                elif "A" <= ch <= "Z":
                    slots[ord(ch) - ord("A")] += 1
            self.counts = tuple(slots)

    def get(self, letter: str) -> int:
        i = ord(letter.lower()) - ord("a")
        if not 0 <= i < 26:
            raise ValueError(f"not a letter: {letter!r}")
        return self.counts[i]

    def size(self) -> int:
        return sum(self.counts)

    def is_empty(self) -> bool:
        return self.size() == 0

    def __str__(self) -> str:
        inner = "".join(ch * n for ch, n in zip(string.ascii_lowercase, self.counts))
        return f"[{inner}]"

    def __eq__(self, other) -> bool:
        return isinstance(other, LetterInventory) and self.counts == other.counts

    def __hash__(self) -> int:
        return hash(self.counts)

    def add(self, other: "LetterInventory") -> "LetterInventory":
        return LetterInventory(counts=tuple(a + b for a, b in zip(self.counts, other.counts)))

    def subtract(self, other: "LetterInventory") -> "LetterInventory | None":
        """Elementwise difference, or None when other is not contained in self."""
        diff = tuple(a - b for a, b in zip(self.counts, other.counts))
        if any(d < 0 for d in diff):
            return None
        return LetterInventory(counts=diff)


def make_inventory(text: str) -> LetterInventory:
    return LetterInventory(text)
