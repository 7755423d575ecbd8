"""Observation/action space types: bounded tensor boxes and finite discrete sets.

Only these two space kinds exist.  Dict/tuple/graph spaces are out of scope on
purpose: every transform in this library is a function of a single tensor (or a
single discrete choice), and the composition story stays simple because of it.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from .dtypes import DTYPES, cast_array, is_float, to_numpy
from .errors import InvalidParam
from .rng import Pcg32

__all__ = ["BoxSpace", "DiscreteSpace", "Space", "space_contains", "sample_space"]

# widest finite window used when drawing from (half-)unbounded boxes
_SAMPLE_CLAMP = 1.0e6


@dataclass(eq=False)
class BoxSpace:
    """Tensor space: all arrays of a fixed shape/dtype with low <= x <= high.

    low/high are full arrays of the space dtype (bounds are inclusive).
    """

    low: np.ndarray
    high: np.ndarray
    dtype: str

    def __init__(self, low, high, shape=None, dtype="f32"):
        if dtype not in DTYPES:
            raise InvalidParam(f"unknown dtype {dtype!r}")
        np_t = to_numpy(dtype)
        lo = np.asarray(low, dtype=np_t)
        hi = np.asarray(high, dtype=np_t)
        if shape is not None:
            lo = np.broadcast_to(lo, shape).astype(np_t)
            hi = np.broadcast_to(hi, shape).astype(np_t)
        if lo.shape != hi.shape:
            raise InvalidParam(
                f"low shape {lo.shape} != high shape {hi.shape}"
            )
        self.low = np.ascontiguousarray(lo)
        self.high = np.ascontiguousarray(hi)
        self.dtype = dtype

    @property
    def shape(self) -> tuple:
        return self.low.shape

    def contains(self, x) -> bool:
        if not isinstance(x, np.ndarray):
            return False
        if x.shape != self.shape or x.dtype != to_numpy(self.dtype):
            return False
        # NaN compares false on both sides, so it is rejected for free
        return bool(np.all(x >= self.low) and np.all(x <= self.high))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BoxSpace)
            and self.dtype == other.dtype
            and self.shape == other.shape
            and np.array_equal(self.low, other.low)
            and np.array_equal(self.high, other.high)
        )

    def __repr__(self) -> str:
        return f"BoxSpace(shape={self.shape}, dtype={self.dtype})"


@dataclass(frozen=True)
class DiscreteSpace:
    """Integer actions {0, 1, ..., n-1}."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise InvalidParam(f"DiscreteSpace needs a positive int n, got {self.n!r}")

    def contains(self, x) -> bool:
        if isinstance(x, bool) or isinstance(x, float):
            return False
        if isinstance(x, np.ndarray):
            return False
        try:
            v = int(x)
        except (TypeError, ValueError):
            return False
        return 0 <= v < self.n


Space = Union[BoxSpace, DiscreteSpace]


def space_contains(space: Space, value) -> bool:
    """True iff ``value`` is a member of ``space``.

    Total: a mismatched kind/shape/dtype yields False, never an exception.
    """
    return space.contains(value)


def sample_space(space: Space, rng: Pcg32):
    """Draw a deterministic sample from ``space`` using ``rng``.

    The draw order and arithmetic are part of the cross-implementation
    contract (the benchmark's random policy and the bindings both use it):

    - Discrete(n): ``rng.next_u32() % n``.
    - Box float: one ``next_uniform`` per element in row-major order, mapped to
      ``lo + u * (hi - lo)`` in f64 then cast to the space dtype; infinite
      bounds are clamped to +/-1e6 first.
    - Box int: one ``next_int(lo, hi)`` per element in row-major order.
    """
    if isinstance(space, DiscreteSpace):
        return rng.next_u32() % space.n
    lo = space.low.astype(np.float64).ravel()
    hi = space.high.astype(np.float64).ravel()
    lo = np.maximum(lo, -_SAMPLE_CLAMP)
    hi = np.minimum(hi, _SAMPLE_CLAMP)
    out = np.empty(lo.shape[0], dtype=np.float64)
    if is_float(space.dtype):
        for i in range(out.shape[0]):
            out[i] = lo[i] + rng.next_uniform() * (hi[i] - lo[i])
    else:
        for i in range(out.shape[0]):
            out[i] = rng.next_int(int(lo[i]), int(hi[i]))
    return cast_array(out, space.dtype).reshape(space.shape)
