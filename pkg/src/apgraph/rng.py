"""SplitMix64, a 64-bit mixing generator.

Picked so that a seed means the same stream in any language:

    state = (state + 0x9E3779B97F4A7C15) mod 2^64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output z ^ (z >> 31)

Bounded draws use rejection (no modulo bias); subsets use Floyd's algorithm.
"""

from __future__ import annotations

from fractions import Fraction

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def between(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def bernoulli(self, p: Fraction) -> bool:
        """True with probability exactly ``p`` up to 2^-64 resolution: ``u64 < p * 2^64``."""
        p = Fraction(p)
        return self.next_u64() * p.denominator < p.numerator << 64

    def subset(self, n: int, population: int) -> list[int]:
        """``n`` distinct integers from ``range(population)``, sorted (Floyd's algorithm)."""
        if not 0 <= n <= population:
            raise ValueError(f"cannot draw {n} distinct values from {population}")
        chosen: set[int] = set()
        for j in range(population - n, population):
            t = self.below(j + 1)
            chosen.add(j if t in chosen else t)
        return sorted(chosen)

    def shuffled(self, items: list) -> list:
        out = list(items)
        for i in range(len(out) - 1, 0, -1):
            j = self.below(i + 1)
            out[i], out[j] = out[j], out[i]
        return out
