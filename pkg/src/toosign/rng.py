"""Seedable deterministic randomness.

All algorithm randomness flows through :class:`Rng`; there is no ambient
entropy inside any signing, hashing or game code.  The stream is defined by
(seed, counter): block ``i`` is SHA-256(seed || i) and identical
(seed, counter) always reproduces identical output.
"""

from __future__ import annotations

import hashlib


class Rng:
    def __init__(self, seed: bytes, counter: int = 0):
        if len(seed) != 32:
            raise ValueError("seed must be exactly 32 bytes")
        self.seed = seed
        self.counter = counter
        self._buf = b""

    def _next_block(self) -> bytes:
        block = hashlib.sha256(self.seed + self.counter.to_bytes(8, "big")).digest()
        self.counter += 1
        return block

    def random_bytes(self, n: int) -> bytes:
        while len(self._buf) < n:
            self._buf += self._next_block()
        out, self._buf = self._buf[:n], self._buf[n:]
        return out

    def randbelow(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        nbytes = (bound.bit_length() + 7) // 8
        limit = (256**nbytes // bound) * bound
        while True:
            x = int.from_bytes(self.random_bytes(nbytes), "big")
            if x < limit:
                return x % bound

    def random_bits(self, n: int) -> list[int]:
        """n independent uniform bits."""
        raw = self.random_bytes((n + 7) // 8)
        return [(raw[i // 8] >> (i % 8)) & 1 for i in range(n)]

    def fork(self, label: bytes) -> "Rng":
        """Derive an independent stream; safe to hand to a concurrent caller."""
        return Rng(hashlib.sha256(self.seed + b"/fork/" + label).digest())


def rng_from_int(seed: int) -> Rng:
    """Convenience constructor for tests and game sweeps."""
    return Rng(hashlib.sha256(b"seed:" + seed.to_bytes(16, "big")).digest())
