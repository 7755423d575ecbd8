"""Deterministic PRNG used everywhere randomness is part of a contract.

PCG32 (XSH-RR output over a 64-bit LCG).  Chosen because the whole generator is
a dozen lines of integer arithmetic, so an identical stream can be reproduced
in any host language from the seed alone — streams are bit-identical across
platforms and implementations, which the trajectory checksums rely on.
"""

__all__ = ["Pcg32"]

_MASK64 = (1 << 64) - 1
_MULT = 6364136223846793005


class Pcg32:
    """PCG32 generator.

    seed: u64 initial state contribution.
    stream: selects one of 2**63 independent sequences (default 0).
    """

    def __init__(self, seed: int, stream: int = 0):
        if not 0 <= seed < 1 << 64:
            raise ValueError(f"seed must be a u64, got {seed}")
        self._inc = ((stream << 1) | 1) & _MASK64
        self._state = 0
        self.next_u32()
        self._state = (self._state + seed) & _MASK64
        self.next_u32()

    def next_u32(self) -> int:
        old = self._state
        self._state = (old * _MULT + self._inc) & _MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & 0xFFFFFFFF
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((32 - rot) & 31))) & 0xFFFFFFFF

    def next_uniform(self) -> float:
        """Uniform double in [0, 1): next_u32() / 2**32 (exact)."""
        return self.next_u32() * 2.0**-32

    def next_int(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in [lo, hi] via modulo reduction.

        The tiny modulo bias is accepted: the contract here is determinism and
        a documented reduction, not perfect uniformity.
        """
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.next_u32() % (hi - lo + 1)
