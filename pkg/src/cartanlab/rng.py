"""SplitMix64 streams keyed by ``(seed, suite id, trial)``.

The stream for a trial starts from

    state = mix(mix(seed ^ fnv1a64(suite)) + GOLDEN * (trial + 1))

and each draw adds ``GOLDEN`` to the state and returns ``mix(state)``, where
``mix`` is the SplitMix64 finalizer.  Everything is plain 64-bit integer
arithmetic, so streams are identical on every platform and Python version.
"""
from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def fnv1a64(text: str) -> int:
    h = 0xCBF29CE484222325
    for b in text.encode("utf-8"):
        h = ((h ^ b) * 0x100000001B3) & MASK64
    return h


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    @classmethod
    def for_trial(cls, seed: int, suite: str, trial: int) -> "SplitMix64":
        base = mix((seed & MASK64) ^ fnv1a64(suite))
        return cls(mix(base + GOLDEN * (trial + 1)))

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix(self.state)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - (1 << 64) % n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def chance(self, num: int, den: int) -> bool:
        return self.below(den) < num

    def sample(self, seq, k: int) -> list:
        pool = list(seq)
        out = []
        for _ in range(min(k, len(pool))):
            out.append(pool.pop(self.below(len(pool))))
        return out
