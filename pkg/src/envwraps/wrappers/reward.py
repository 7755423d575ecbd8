"""Reward wrappers."""

from ..errors import InvalidParam
from .base import RewardKernel, apply_kernel

__all__ = ["clip_reward"]


class ClipRewardKernel(RewardKernel):
    def __init__(self, lower: float = -1.0, upper: float = 1.0):
        if lower > upper:
            raise InvalidParam(f"clip_reward needs lower <= upper, got [{lower}, {upper}]")
        self.lower = float(lower)
        self.upper = float(upper)

    def apply(self, reward: float) -> float:
        return min(self.upper, max(self.lower, reward))


def clip_reward(env, lower: float = -1.0, upper: float = 1.0):
    """Clamp rewards into [lower, upper]; in-range rewards pass through bit-identically."""
    return apply_kernel(env, lambda i: ClipRewardKernel(lower, upper), "reward")
