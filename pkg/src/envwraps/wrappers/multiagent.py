"""Multi-agent homogenization wrappers.

These exist so heterogeneous agents can share one policy network: after
padding, every agent advertises the identical observation/action space, and
agent identity is recoverable from an appended indicator.
All three operate on parallel envs only.
"""

import numpy as np

from ..dtypes import to_numpy
from ..env import ParallelEnv
from ..errors import InvalidParam, MalformedAgentId, PreconditionFailed
from ..spaces import BoxSpace, DiscreteSpace
from .base import ActionKernel, ObsKernel, ParallelKernelEnv

__all__ = ["agent_indicator", "pad_observations", "pad_action_space"]


def _require_parallel(env, what: str) -> ParallelEnv:
    if not isinstance(env, ParallelEnv):
        raise PreconditionFailed(f"{what} applies to parallel envs only")
    return env


def _agent_type(agent_id: str) -> str:
    if "_" not in agent_id:
        raise MalformedAgentId(
            f"agent id {agent_id!r} has no '_'; expected '<type>_<n>'"
        )
    return agent_id.rsplit("_", 1)[0]


class _IndicatorKernel(ObsKernel):
    def __init__(self, index: int, count: int):
        self.index = index
        self.count = count

    def bind(self, space):
        box = space
        self._rank = len(box.shape)
        np_t = to_numpy(box.dtype)
        self._np_dtype = np_t
        self._scale = 255 if box.dtype == "u8" else 1
        k = self.count
        if self._rank == 1:
            hot = np.zeros(k, dtype=np_t)
            hot[self.index] = self._scale
            self._hot = hot
            lo = np.concatenate([box.low, np.zeros(k, dtype=np_t)])
            hi = np.concatenate([box.high, np.full(k, self._scale, dtype=np_t)])
            return BoxSpace(lo, hi, dtype=box.dtype)
        h, w, c = box.shape
        plane = np.zeros((h, w, k), dtype=np_t)
        plane[:, :, self.index] = self._scale
        self._plane = plane
        lo = np.concatenate([box.low, np.zeros((h, w, k), dtype=np_t)], axis=-1)
        hi = np.concatenate([box.high, np.full((h, w, k), self._scale, dtype=np_t)], axis=-1)
        return BoxSpace(lo, hi, dtype=box.dtype)

    def apply(self, obs):
        if self._rank == 1:
            return np.concatenate([obs, self._hot])
        return np.concatenate([obs, self._plane], axis=-1)


def agent_indicator(env, type_only: bool = False):
    """Append a one-hot identity to every observation.

    ``type_only=False``: the hot index is the agent's roster position and K is
    the agent count.  ``type_only=True``: ids are split on the last underscore
    and the hot index identifies the type (first-appearance order).  The hot
    value is scaled to the space dtype (255 for u8, 1 otherwise).
    """
    _require_parallel(env, "agent_indicator")
    roster = list(env.agents)
    spaces = [env.observation_space(a) for a in roster]
    base = spaces[0]
    if not isinstance(base, BoxSpace) or len(base.shape) not in (1, 3):
        raise PreconditionFailed(
            "agent_indicator needs rank-1 or rank-3 Box observation spaces"
        )
    if any(s != base for s in spaces[1:]):
        raise PreconditionFailed(
            "agent_indicator needs identical observation spaces for all agents"
        )
    if type_only:
        types: list = []
        for a in roster:
            t = _agent_type(a)
            if t not in types:
                types.append(t)
        indices = {a: types.index(_agent_type(a)) for a in roster}
        count = len(types)
    else:
        indices = {a: i for i, a in enumerate(roster)}
        count = len(roster)
    kernels = {a: _IndicatorKernel(indices[a], count) for a in roster}
    return ParallelKernelEnv(env, obs_kernels=kernels)


class _PadObsKernel(ObsKernel):
    def __init__(self, target_shape, common_low, common_high):
        self.target_shape = target_shape
        self._lo = common_low
        self._hi = common_high

    def bind(self, space):
        self._np_dtype = to_numpy(space.dtype)
        return BoxSpace(self._lo, self._hi, dtype=space.dtype)

    def apply(self, obs):
        if obs.shape == self.target_shape:
            return obs
        out = np.zeros(self.target_shape, dtype=self._np_dtype)
        out[tuple(slice(0, d) for d in obs.shape)] = obs
        return out


def _padded_to(arr, target_shape):
    out = np.zeros(target_shape, dtype=arr.dtype)
    out[tuple(slice(0, d) for d in arr.shape)] = arr
    return out


def pad_observations(env):
    """Zero-pad every observation (origin-anchored) to the elementwise-max shape.

    All agents end up with one identical Box: per-position union of the padded
    bounds, widened through zero so the padding itself is contained.
    """
    _require_parallel(env, "pad_observations")
    roster = list(env.agents)
    spaces = [env.observation_space(a) for a in roster]
    if not all(isinstance(s, BoxSpace) for s in spaces):
        raise PreconditionFailed("pad_observations needs Box observation spaces")
    ranks = {len(s.shape) for s in spaces}
    dtypes = {s.dtype for s in spaces}
    if len(ranks) != 1 or len(dtypes) != 1:
        raise PreconditionFailed(
            f"pad_observations needs equal rank and dtype, got ranks {sorted(ranks)} dtypes {sorted(dtypes)}"
        )
    target = tuple(
        max(s.shape[axis] for s in spaces) for axis in range(ranks.pop())
    )
    lo = np.minimum.reduce([_padded_to(s.low, target) for s in spaces])
    hi = np.maximum.reduce([_padded_to(s.high, target) for s in spaces])
    lo = np.minimum(lo, 0)
    hi = np.maximum(hi, 0)
    kernels = {a: _PadObsKernel(target, lo, hi) for a in roster}
    return ParallelKernelEnv(env, obs_kernels=kernels)


class _PadDiscreteActionKernel(ActionKernel):
    def __init__(self, n_max: int, n_orig: int):
        self.n_max = n_max
        self.n_orig = n_orig

    def bind(self, space):
        return DiscreteSpace(self.n_max)

    def apply(self, action):
        a = int(action)
        if not 0 <= a < self.n_max:
            raise InvalidParam(f"action {a} outside padded Discrete({self.n_max})")
        return a if a < self.n_orig else 0


class _PadBoxActionKernel(ActionKernel):
    def __init__(self, target_shape, common_low, common_high):
        self.target_shape = target_shape
        self._lo = common_low
        self._hi = common_high

    def bind(self, space):
        self._space = space
        return BoxSpace(self._lo, self._hi, dtype=space.dtype)

    def apply(self, action):
        a = np.asarray(action)
        region = a[tuple(slice(0, d) for d in self._space.shape)]
        # clamp into the agent's own bounds so the forward is always contained
        return np.clip(region, self._space.low, self._space.high).astype(
            to_numpy(self._space.dtype)
        )


def pad_action_space(env):
    """Give every agent the same action space.

    All-Discrete: everyone advertises Discrete(n_max); a submitted action at
    or above the agent's own n forwards as action 0.  All-Box: shapes pad to
    the elementwise max; advertised bounds are the per-position union (with
    [0, 0] where no agent reaches); forwards truncate to the agent's leading
    region and clamp into its own bounds.
    """
    _require_parallel(env, "pad_action_space")
    roster = list(env.agents)
    spaces = [env.action_space(a) for a in roster]
    if all(isinstance(s, DiscreteSpace) for s in spaces):
        n_max = max(s.n for s in spaces)
        kernels = {
            a: _PadDiscreteActionKernel(n_max, s.n) for a, s in zip(roster, spaces)
        }
        return ParallelKernelEnv(env, action_kernels=kernels)
    if all(isinstance(s, BoxSpace) for s in spaces):
        ranks = {len(s.shape) for s in spaces}
        dtypes = {s.dtype for s in spaces}
        if len(ranks) != 1 or len(dtypes) != 1:
            raise PreconditionFailed(
                "pad_action_space needs Box action spaces of equal rank and dtype"
            )
        target = tuple(
            max(s.shape[axis] for s in spaces) for axis in range(ranks.pop())
        )
        # positions covered by an agent take the union of its bounds; bare
        # padding positions stay pinned at [0, 0]
        lo = np.minimum.reduce([_padded_to(s.low, target) for s in spaces])
        hi = np.maximum.reduce([_padded_to(s.high, target) for s in spaces])
        kernels = {
            a: _PadBoxActionKernel(target, lo, hi) for a in roster
        }
        return ParallelKernelEnv(env, action_kernels=kernels)
    raise PreconditionFailed(
        "pad_action_space needs all-Discrete or all-Box action spaces"
    )
