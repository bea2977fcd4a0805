"""Seedable randomness for the samplers.

A SeedStream wraps a Mersenne-Twister state behind the three draw kinds
the samplers need: uniform permutations (Fisher-Yates over positions),
uniform vertices, and categorical draws over exact rational weights.
Categorical draws compare cumulative Fraction thresholds against a
uniform rational built from 64 random bits, so outcome probabilities are
quantized to multiples of 2**-64.

Streams are deterministic per seed and can be split into independent
child streams by label, which keeps parallel work reproducible.
"""
from __future__ import annotations

import hashlib
import random
from fractions import Fraction
from typing import Iterable, Optional, TypeVar

from .graphs import Permutation

T = TypeVar("T")

_TWO64 = 1 << 64


class SeedStream:
    def __init__(self, seed: int) -> None:
        self.seed = int(seed)
        self._rng = random.Random(self.seed)

    def split(self, label: str) -> "SeedStream":
        """Child stream whose seed is derived from (seed, label)."""
        digest = hashlib.blake2b(
            f"{self.seed}/{label}".encode(), digest_size=8
        ).digest()
        return SeedStream(int.from_bytes(digest, "big"))

    def bits64(self) -> int:
        return self._rng.getrandbits(64)

    def unit_fraction(self) -> Fraction:
        """Uniform rational in [0, 1) with resolution 2**-64."""
        return Fraction(self.bits64(), _TWO64)

    def randrange(self, n: int) -> int:
        return self._rng.randrange(n)

    def vertex(self, n: int) -> int:
        """Uniform vertex in 1..n."""
        return self._rng.randrange(n) + 1

    def permutation(self, n: int) -> Permutation:
        """Uniform permutation of 1..n via Fisher-Yates over positions."""
        seq = list(range(1, n + 1))
        for i in range(n - 1, 0, -1):
            j = self._rng.randrange(i + 1)
            seq[i], seq[j] = seq[j], seq[i]
        return Permutation(tuple(seq))

    def categorical(self, weighted: Iterable[tuple[T, Fraction]]) -> Optional[T]:
        """Draw one outcome by exact cumulative weights; None if the
        weights sum to less than 1 and the draw lands in the deficit."""
        u = self.unit_fraction()
        cum = Fraction(0)
        for value, w in weighted:
            cum += w
            if u < cum:
                return value
        if cum > 1:
            raise ValueError(f"categorical weights sum to {cum} > 1")
        return None


def as_stream(seed_or_stream: "int | SeedStream") -> SeedStream:
    if isinstance(seed_or_stream, SeedStream):
        return seed_or_stream
    return SeedStream(seed_or_stream)
