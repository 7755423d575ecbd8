"""Wrapper plumbing shared by every concrete wrapper.

Each wrapper is one *kernel*: a value transform plus a rule rewriting the
corresponding space.  Kernels know nothing about envs, which is what makes a
single-agent wrapper liftable to parallel envs — the lift just instantiates one
kernel per agent, so stateful kernels (frame buffers, sticky actions) keep
independent per-agent state.

Kernel lifecycle: ``bind(space)`` validates the wrapper's precondition against
the env's space and returns the transformed space (this happens at wrapper
construction, never at first step); ``on_reset``/``apply`` run per emission.
"""

import numpy as np

from ..env import Env, ParallelEnv, StepResult
from ..errors import PreconditionFailed
from ..spaces import Space

__all__ = [
    "ObsKernel",
    "ActionKernel",
    "RewardKernel",
    "KernelEnv",
    "ParallelKernelEnv",
    "lift_to_parallel",
    "apply_kernel",
]


class ObsKernel:
    """Observation transform."""

    def bind(self, space: Space) -> Space:
        raise NotImplementedError

    def on_reset(self, obs: np.ndarray) -> np.ndarray:
        # stateless kernels treat the reset emission like any other
        return self.apply(obs)

    def apply(self, obs: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class ActionKernel:
    """Action transform: advertised-space action -> base-space action."""

    def bind(self, space: Space) -> Space:
        raise NotImplementedError

    def on_reset(self) -> None:
        pass

    def apply(self, action):
        raise NotImplementedError


class RewardKernel:
    """Reward transform (stateless)."""

    def apply(self, reward: float) -> float:
        raise NotImplementedError


class KernelEnv(Env):
    """Applies exactly one kernel over a single-agent env."""

    def __init__(self, env: Env, *, obs_kernel=None, action_kernel=None, reward_kernel=None):
        self.env = env
        self._ok = obs_kernel
        self._ak = action_kernel
        self._rk = reward_kernel
        self.observation_space = (
            self._ok.bind(env.observation_space) if self._ok else env.observation_space
        )
        self.action_space = (
            self._ak.bind(env.action_space) if self._ak else env.action_space
        )

    def reset(self, seed: int | None = None) -> np.ndarray:
        obs = self.env.reset(seed)
        if self._ak:
            self._ak.on_reset()
        if self._ok:
            return self._ok.on_reset(obs)
        return obs

    def step(self, action) -> StepResult:
        if self._ak:
            action = self._ak.apply(action)
        res = self.env.step(action)
        obs = self._ok.apply(res.observation) if self._ok else res.observation
        reward = self._rk.apply(res.reward) if self._rk else res.reward
        return StepResult(obs, reward, res.done, res.info)


class ParallelKernelEnv(ParallelEnv):
    """Applies per-agent kernels of one kind over a parallel env.

    ``obs_kernels``/``action_kernels``/``reward_kernels`` map agent id ->
    kernel instance; agents absent from the mapping pass through untouched
    (the lift always covers the full roster).
    """

    def __init__(self, env: ParallelEnv, *, obs_kernels=None, action_kernels=None,
                 reward_kernels=None):
        self.env = env
        self._ok = obs_kernels or {}
        self._ak = action_kernels or {}
        self._rk = reward_kernels or {}
        self._obs_spaces = {}
        self._act_spaces = {}
        for agent in env.agents:
            try:
                self._obs_spaces[agent] = (
                    self._ok[agent].bind(env.observation_space(agent))
                    if agent in self._ok else env.observation_space(agent)
                )
                self._act_spaces[agent] = (
                    self._ak[agent].bind(env.action_space(agent))
                    if agent in self._ak else env.action_space(agent)
                )
            except PreconditionFailed as e:
                raise PreconditionFailed(f"agent {agent!r}: {e}") from None

    @property
    def agents(self) -> list:
        return self.env.agents

    def observation_space(self, agent: str) -> Space:
        return self._obs_spaces[agent]

    def action_space(self, agent: str) -> Space:
        return self._act_spaces[agent]

    def reset(self, seed: int | None = None) -> dict:
        obs_map = self.env.reset(seed)
        for kernel in self._ak.values():
            kernel.on_reset()
        out = {}
        for agent, obs in obs_map.items():
            out[agent] = self._ok[agent].on_reset(obs) if agent in self._ok else obs
        return out

    def step(self, actions: dict) -> dict:
        fwd = {
            agent: (self._ak[agent].apply(a) if agent in self._ak else a)
            for agent, a in actions.items()
        }
        results = self.env.step(fwd)
        out = {}
        for agent, res in results.items():
            obs = self._ok[agent].apply(res.observation) if agent in self._ok else res.observation
            reward = self._rk[agent].apply(res.reward) if agent in self._rk else res.reward
            out[agent] = StepResult(obs, reward, res.done, res.info)
        return out


def lift_to_parallel(kernel_factory, env: ParallelEnv, kind: str) -> ParallelKernelEnv:
    """Lift a single-agent kernel over every agent of a parallel env.

    ``kernel_factory(agent_index)`` builds one fresh kernel per agent (the
    index is the agent's roster position, so seeded kernels can derive
    independent per-agent streams).
    """
    kernels = {agent: kernel_factory(i) for i, agent in enumerate(env.agents)}
    slot = {"obs": "obs_kernels", "action": "action_kernels", "reward": "reward_kernels"}[kind]
    return ParallelKernelEnv(env, **{slot: kernels})


def apply_kernel(env, kernel_factory, kind: str):
    """Apply a kernel to a single-agent env directly or lift it per agent."""
    if isinstance(env, ParallelEnv):
        return lift_to_parallel(kernel_factory, env, kind)
    kernel = kernel_factory(0)
    slot = {"obs": "obs_kernel", "action": "action_kernel", "reward": "reward_kernel"}[kind]
    return KernelEnv(env, **{slot: kernel})
