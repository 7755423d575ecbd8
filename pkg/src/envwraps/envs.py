"""Reference environments: tiny, fully deterministic, seed-independent.

They exist to make wrapper behaviour checkable by hand — every observation is
a closed-form function of the step counter, so any trajectory can be predicted
exactly without running anything.
"""

import numpy as np

from .env import Env, ParallelEnv, StepResult, check_parallel_actions, require_not_done
from .errors import InvalidParam, UnknownEnv
from .spaces import BoxSpace, DiscreteSpace

__all__ = ["CounterEnv", "GradientPixelEnv", "MultiCounterEnv", "make_reference_env"]


class CounterEnv(Env):
    """Vector env: observation is a d-vector of f32 all equal to the step
    counter t; reward is 1.0 per step; done exactly at t == T.

    The action space is Box[-1, 1]^(1) f32 and actions are ignored — it is
    there to give action wrappers a finite-bounds target.
    """

    def __init__(self, T: int = 100, d: int = 4):
        if not isinstance(T, int) or T < 1:
            raise InvalidParam(f"counter T must be an int >= 1, got {T!r}")
        if not isinstance(d, int) or d < 1:
            raise InvalidParam(f"counter d must be an int >= 1, got {d!r}")
        self.T = T
        self.d = d
        self.observation_space = BoxSpace(0.0, float(T), shape=(d,), dtype="f32")
        self.action_space = BoxSpace(-1.0, 1.0, shape=(1,), dtype="f32")
        self._t = 0
        self._done = False

    def _obs(self) -> np.ndarray:
        return np.full(self.d, float(self._t), dtype=np.float32)

    def reset(self, seed: int | None = None) -> np.ndarray:
        self._t = 0
        self._done = False
        return self._obs()

    def step(self, action) -> StepResult:
        require_not_done(self._done)
        self._t += 1
        self._done = self._t == self.T
        return StepResult(self._obs(), 1.0, self._done, {"t": str(self._t)})


class GradientPixelEnv(Env):
    """Image env: u8 (H, W, 3) with pixel (r, c, ch) = (r*W + c + t*ch) mod 256.

    Channel 0 is a static ramp; channels 1 and 2 scroll with t at different
    rates, so any resampling or stacking mistake shows up in the checksum.
    Reward is 0.0; done at t == T.  Actions (Discrete(4)) are ignored.
    """

    def __init__(self, H: int = 16, W: int = 16, T: int = 100):
        for name, v in (("H", H), ("W", W), ("T", T)):
            if not isinstance(v, int) or v < 1:
                raise InvalidParam(f"pixel {name} must be an int >= 1, got {v!r}")
        self.H, self.W, self.T = H, W, T
        self.observation_space = BoxSpace(0, 255, shape=(H, W, 3), dtype="u8")
        self.action_space = DiscreteSpace(4)
        self._t = 0
        self._done = False

    def _obs(self) -> np.ndarray:
        r = np.arange(self.H).reshape(self.H, 1, 1)
        c = np.arange(self.W).reshape(1, self.W, 1)
        ch = np.arange(3).reshape(1, 1, 3)
        return ((r * self.W + c + self._t * ch) % 256).astype(np.uint8)

    def reset(self, seed: int | None = None) -> np.ndarray:
        self._t = 0
        self._done = False
        return self._obs()

    def step(self, action) -> StepResult:
        require_not_done(self._done)
        self._t += 1
        self._done = self._t == self.T
        return StepResult(self._obs(), 0.0, self._done, {})


class MultiCounterEnv(ParallelEnv):
    """Parallel env with per-agent observation dims and Discrete action sizes.

    Observation: the agent's own-dim f32 vector filled with t.  Reward: the
    float value of the agent's submitted action (an echo, so action rewrites
    by wrappers are visible in rewards).  All agents share the horizon T.
    """

    def __init__(self, agents=None, T: int = 100):
        if agents is None:
            agents = [("pursuer_0", 3, 4), ("pursuer_1", 3, 4), ("evader_0", 5, 2)]
        if not isinstance(T, int) or T < 1:
            raise InvalidParam(f"multi_counter T must be an int >= 1, got {T!r}")
        specs = []
        for entry in agents:
            if len(entry) != 3:
                raise InvalidParam(f"agent spec must be (id, obs_dim, n_actions), got {entry!r}")
            aid, dim, n = entry
            if not isinstance(aid, str) or not aid:
                raise InvalidParam(f"agent id must be a non-empty string, got {aid!r}")
            if not isinstance(dim, int) or dim < 1:
                raise InvalidParam(f"agent {aid!r} obs_dim must be an int >= 1, got {dim!r}")
            if not isinstance(n, int) or n < 1:
                raise InvalidParam(f"agent {aid!r} n_actions must be an int >= 1, got {n!r}")
            specs.append((aid, dim, n))
        ids = [s[0] for s in specs]
        if len(set(ids)) != len(ids):
            raise InvalidParam(f"duplicate agent ids in {ids}")
        self.T = T
        self._roster = ids
        self._obs_spaces = {
            aid: BoxSpace(0.0, float(T), shape=(dim,), dtype="f32") for aid, dim, _ in specs
        }
        self._act_spaces = {aid: DiscreteSpace(n) for aid, _, n in specs}
        self._dims = {aid: dim for aid, dim, _ in specs}
        self.agents = list(ids)
        self._t = 0

    def observation_space(self, agent: str) -> BoxSpace:
        return self._obs_spaces[agent]

    def action_space(self, agent: str) -> DiscreteSpace:
        return self._act_spaces[agent]

    def _obs(self, agent: str) -> np.ndarray:
        return np.full(self._dims[agent], float(self._t), dtype=np.float32)

    def reset(self, seed: int | None = None) -> dict:
        self._t = 0
        self.agents = list(self._roster)
        return {a: self._obs(a) for a in self.agents}

    def step(self, actions: dict) -> dict:
        if not self.agents:
            raise InvalidParam("no live agents; call reset()")
        check_parallel_actions(self.agents, actions)
        self._t += 1
        done = self._t == self.T
        out = {}
        for a in self.agents:
            out[a] = StepResult(self._obs(a), float(int(actions[a])), done, {})
        if done:
            self.agents = []
        return out


_BUILDERS = {
    "counter": CounterEnv,
    "pixel": GradientPixelEnv,
    "multi_counter": MultiCounterEnv,
}


def make_reference_env(name: str, params: dict | None = None):
    """Construct a reference env by registered name."""
    if name not in _BUILDERS:
        raise UnknownEnv(f"unknown env {name!r}; expected one of {sorted(_BUILDERS)}")
    params = dict(params or {})
    if name == "multi_counter" and "agents" in params:
        params["agents"] = [tuple(entry) for entry in params["agents"]]
    try:
        return _BUILDERS[name](**params)
    except TypeError as e:
        raise InvalidParam(str(e)) from None
