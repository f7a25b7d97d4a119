"""splitmix64: a deterministic 64-bit generator, identical in any language.

Chosen over stdlib RNGs so that seeded output can be reproduced exactly
by any reimplementation (tests check against an independent oracle).
"""

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Next output reduced mod bound (bound >= 1)."""
        return self.next() % bound
