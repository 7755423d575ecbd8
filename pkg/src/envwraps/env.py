"""Environment contracts: single-agent and parallel multi-agent.

Both contracts are deliberately small:

- ``Env``: ``reset(seed) -> obs`` and ``step(action) -> StepResult``.  Calling
  ``step`` after a ``done=True`` result and before the next ``reset`` raises
  :class:`ResetNeeded`.  Equal seeds on equally-configured envs must yield
  bit-identical trajectories.
- ``ParallelEnv``: all live agents act simultaneously.  ``step`` takes exactly
  one action per live agent and returns one :class:`StepResult` per acting
  agent; agents whose result carried ``done=True`` are removed from the live
  list afterwards.  Mappings preserve the roster order.

``info`` is a flat ``str -> str`` mapping and wrappers pass it through
untouched.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParam, ResetNeeded
from .spaces import Space

__all__ = ["StepResult", "Env", "ParallelEnv"]


@dataclass
class StepResult:
    observation: np.ndarray
    reward: float
    done: bool
    info: dict = field(default_factory=dict)


class Env:
    """Single-agent environment."""

    observation_space: Space
    action_space: Space

    def reset(self, seed: int | None = None) -> np.ndarray:
        raise NotImplementedError

    def step(self, action) -> StepResult:
        raise NotImplementedError


class ParallelEnv:
    """Simultaneous-action multi-agent environment.

    ``agents`` is the ordered list of live agent ids; before the first reset it
    holds the full roster.
    """

    agents: list

    def observation_space(self, agent: str) -> Space:
        raise NotImplementedError

    def action_space(self, agent: str) -> Space:
        raise NotImplementedError

    def reset(self, seed: int | None = None) -> dict:
        raise NotImplementedError

    def step(self, actions: dict) -> dict:
        raise NotImplementedError


def check_parallel_actions(live_agents, actions) -> None:
    """Shared validation: exactly one action per live agent."""
    missing = [a for a in live_agents if a not in actions]
    extra = [a for a in actions if a not in live_agents]
    if missing or extra:
        raise InvalidParam(
            f"step() needs exactly one action per live agent; "
            f"missing={missing} unexpected={extra}"
        )


def require_not_done(done: bool) -> None:
    if done:
        raise ResetNeeded("episode is over; call reset() before step()")
