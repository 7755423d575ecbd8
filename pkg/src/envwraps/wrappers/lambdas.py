"""User-function wrappers: arbitrary observation/action/reward transforms.

These take host-language callables and therefore never appear in serialized
chain configs — they are library-only API.
"""

import math

import numpy as np

from ..dtypes import from_numpy
from ..errors import (
    ContainmentViolation,
    NonFiniteReward,
    PreconditionFailed,
    SpaceInferenceFailed,
)
from ..spaces import BoxSpace, space_contains
from .base import ActionKernel, ObsKernel, RewardKernel, apply_kernel

__all__ = ["observation_lambda", "action_lambda", "reward_lambda"]


class ObservationLambdaKernel(ObsKernel):
    def __init__(self, fn, space_fn=None, check: bool = False):
        self.fn = fn
        self.space_fn = space_fn
        self.check = check

    def bind(self, space):
        if not isinstance(space, BoxSpace):
            raise PreconditionFailed("observation_lambda needs a Box observation space")
        if self.space_fn is not None:
            self._space = self.space_fn(space)
            return self._space
        # infer the output box by pushing both bounds through fn
        lo = np.asarray(self.fn(space.low))
        hi = np.asarray(self.fn(space.high))
        if lo.shape != hi.shape or lo.dtype != hi.dtype:
            raise SpaceInferenceFailed(
                f"fn(low) -> {lo.shape} {lo.dtype} but fn(high) -> {hi.shape} {hi.dtype}; "
                "pass an explicit space_fn"
            )
        self._space = BoxSpace(np.minimum(lo, hi), np.maximum(lo, hi),
                               dtype=from_numpy(lo.dtype))
        return self._space

    def apply(self, obs):
        out = np.asarray(self.fn(obs))
        if self.check and not space_contains(self._space, out):
            raise ContainmentViolation(
                f"observation_lambda emitted a value outside the declared space {self._space!r}"
            )
        return out


def observation_lambda(env, fn, space_fn=None, check: bool = False):
    """Transform observations with ``fn``.

    Without ``space_fn`` the output space is inferred as the elementwise
    min/max of fn(low) and fn(high).  With ``check=True`` every emission is
    verified against the declared space.
    """
    return apply_kernel(env, lambda i: ObservationLambdaKernel(fn, space_fn, check), "obs")


class ActionLambdaKernel(ActionKernel):
    def __init__(self, fn, wrapped_space):
        self.fn = fn
        self.wrapped_space = wrapped_space

    def bind(self, space):
        self._base_space = space
        return self.wrapped_space

    def apply(self, action):
        out = self.fn(action)
        if not space_contains(self._base_space, out):
            raise ContainmentViolation(
                f"action_lambda produced an action outside the base space {self._base_space!r}"
            )
        return out


def action_lambda(env, fn, wrapped_space):
    """Expose ``wrapped_space`` and forward ``fn(action)``.

    No inference is attempted for actions; the wrapped space is explicit, and
    every forwarded action is checked against the base space.
    """
    return apply_kernel(env, lambda i: ActionLambdaKernel(fn, wrapped_space), "action")


class RewardLambdaKernel(RewardKernel):
    def __init__(self, fn):
        self.fn = fn

    def apply(self, reward: float) -> float:
        out = float(self.fn(reward))
        if not math.isfinite(out):
            raise NonFiniteReward(f"reward transform produced {out}")
        return out


def reward_lambda(env, fn):
    """Transform rewards with ``fn``; NaN/infinite results raise."""
    return apply_kernel(env, lambda i: RewardLambdaKernel(fn), "reward")
