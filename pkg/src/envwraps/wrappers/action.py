"""Action wrappers."""

import numpy as np

from ..dtypes import is_float, to_numpy
from ..errors import InvalidParam, PreconditionFailed, ShapeMismatch
from ..rng import Pcg32
from ..spaces import BoxSpace
from .base import ActionKernel, apply_kernel

__all__ = ["clip_actions", "sticky_actions"]


class ClipActionsKernel(ActionKernel):
    def bind(self, space):
        if not isinstance(space, BoxSpace):
            raise PreconditionFailed(f"clip_actions needs a Box action space, got {space!r}")
        lo = space.low.astype(np.float64)
        hi = space.high.astype(np.float64)
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise PreconditionFailed("clip_actions needs finite action bounds")
        self._space = space
        self._np_dtype = to_numpy(space.dtype)
        # advertise the widest expressible bounds: any right-shape tensor is
        # accepted, then clamped into the base bounds before forwarding
        if is_float(space.dtype):
            wide_lo, wide_hi = -np.inf, np.inf
        else:
            info = np.iinfo(self._np_dtype)
            wide_lo, wide_hi = info.min, info.max
        return BoxSpace(wide_lo, wide_hi, shape=space.shape, dtype=space.dtype)

    def apply(self, action):
        a = np.asarray(action)
        if a.shape != self._space.shape:
            raise ShapeMismatch(
                f"clip_actions got shape {a.shape}, expected {self._space.shape}"
            )
        clamped = np.clip(a.astype(np.float64), self._space.low.astype(np.float64),
                          self._space.high.astype(np.float64))
        return clamped.astype(self._np_dtype)


def clip_actions(env):
    """Accept any right-shape action and clamp it into the base Box bounds."""
    return apply_kernel(env, lambda i: ClipActionsKernel(), "action")


class StickyActionsKernel(ActionKernel):
    """With probability p, repeat the previously forwarded action.

    The draw is taken from the kernel's own PCG32 stream before the submitted
    action is inspected, so exactly one draw is consumed per step regardless
    of the outcome.  A fired repeat leaves last_action unchanged (the repeated
    action stays the sticky one).
    """

    def __init__(self, p: float, seed: int = 0):
        if not isinstance(p, (int, float)) or isinstance(p, bool) or not 0.0 <= p <= 1.0:
            raise InvalidParam(f"sticky_actions p must be in [0, 1], got {p!r}")
        self.p = float(p)
        self._rng = Pcg32(seed)
        self._last = None

    def bind(self, space):
        return space

    def on_reset(self):
        self._last = None

    def apply(self, action):
        u = self._rng.next_uniform()
        if u < self.p and self._last is not None:
            return self._last
        self._last = action.copy() if isinstance(action, np.ndarray) else action
        return self._last


def sticky_actions(env, p: float, seed: int = 0):
    """Repeat the previous action with probability ``p`` each step.

    Lifted over a parallel env, each agent gets an independent stream seeded
    ``seed + agent_index`` (roster position).
    """
    return apply_kernel(env, lambda i: StickyActionsKernel(p, seed + i), "action")
