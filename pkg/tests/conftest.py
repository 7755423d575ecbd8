"""Tiny deterministic probe envs shared across test modules."""

import numpy as np
import pytest

from envwraps import BoxSpace, DiscreteSpace, Env, ParallelEnv, StepResult
from envwraps.env import check_parallel_actions, require_not_done


class RecordingEnv(Env):
    """Counts steps and records every action it is forwarded."""

    def __init__(self, action_space=None, horizon=10**9):
        self.observation_space = BoxSpace(0.0, 1e9, shape=(1,), dtype="f32")
        self.action_space = action_space or BoxSpace(-1.0, 1.0, shape=(1,), dtype="f32")
        self.horizon = horizon
        self.actions = []
        self._t = 0
        self._done = False

    def _obs(self):
        return np.array([float(self._t)], dtype=np.float32)

    def reset(self, seed=None):
        self._t = 0
        self._done = False
        return self._obs()

    def step(self, action):
        require_not_done(self._done)
        self.actions.append(action)
        self._t += 1
        self._done = self._t >= self.horizon
        return StepResult(self._obs(), 1.0, self._done, {})


class VariedRewardEnv(Env):
    """Rewards sweep through [-3, 3] deterministically; obs is the step count."""

    def __init__(self, horizon=10**9):
        self.observation_space = BoxSpace(0.0, 1e9, shape=(1,), dtype="f32")
        self.action_space = DiscreteSpace(3)
        self.horizon = horizon
        self._t = 0
        self._done = False

    def reset(self, seed=None):
        self._t = 0
        self._done = False
        return np.array([0.0], dtype=np.float32)

    def step(self, action):
        require_not_done(self._done)
        self._t += 1
        self._done = self._t >= self.horizon
        reward = ((self._t * 7919) % 6000) / 1000.0 - 3.0
        return StepResult(np.array([float(self._t)], dtype=np.float32), reward, self._done, {})


class TwoBoxParallelEnv(ParallelEnv):
    """Two agents with heterogeneous Box action spaces; rewards echo the
    forwarded action's first element so truncation/clamping is observable."""

    def __init__(self, T=50):
        self.T = T
        self._roster = ["a_0", "a_1"]
        self.agents = list(self._roster)
        self._obs = {
            "a_0": BoxSpace(0.0, float(T), shape=(2,), dtype="f32"),
            "a_1": BoxSpace(0.0, float(T), shape=(2,), dtype="f32"),
        }
        self._act = {
            "a_0": BoxSpace(np.array([-1.0, -2.0], dtype=np.float32),
                            np.array([1.0, 2.0], dtype=np.float32), dtype="f32"),
            "a_1": BoxSpace(np.array([-5.0, -5.0, -5.0], dtype=np.float32),
                            np.array([5.0, 5.0, 5.0], dtype=np.float32), dtype="f32"),
        }
        self.last_forwarded = {}
        self._t = 0

    def observation_space(self, agent):
        return self._obs[agent]

    def action_space(self, agent):
        return self._act[agent]

    def reset(self, seed=None):
        self._t = 0
        self.agents = list(self._roster)
        return {a: np.zeros(2, dtype=np.float32) for a in self.agents}

    def step(self, actions):
        check_parallel_actions(self.agents, actions)
        self._t += 1
        done = self._t == self.T
        out = {}
        for a in self.agents:
            self.last_forwarded[a] = np.asarray(actions[a])
            obs = np.full(2, float(self._t), dtype=np.float32)
            out[a] = StepResult(obs, float(np.asarray(actions[a]).ravel()[0]), done, {})
        if done:
            self.agents = []
        return out


@pytest.fixture
def recording_env():
    return RecordingEnv()


@pytest.fixture
def varied_reward_env():
    return VariedRewardEnv()
