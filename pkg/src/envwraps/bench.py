"""Benchmark runner: step a configured chain and report throughput + checksums.

The observation checksum is 64-bit FNV-1a folded over the raw bytes of every
emitted observation, in emission order (the initial reset, each step, and any
auto-reset emission), with elements encoded row-major little-endian.  For
parallel envs each emission walks the result mapping in roster order.  The
checksum is bit-exact across implementations, which is what lets a foreign
binding prove it received every byte unchanged.

Byte accumulation happens during the run but the FNV fold runs after the
timer stops, so steps_per_second measures env+chain stepping only.
"""

import time
from dataclasses import dataclass

import numpy as np

from .chain import ChainConfig, build_chain
from .dtypes import byte_order_code, from_numpy
from .env import ParallelEnv
from .errors import EnvwrapsError, RuntimeFailure
from .rng import Pcg32
from .spaces import DiscreteSpace, sample_space, space_contains

__all__ = ["RunReport", "fnv1a64", "format_checksum", "obs_bytes", "run_benchmark"]

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a64(data: bytes, h: int = FNV_OFFSET) -> int:
    """Fold ``data`` into a running 64-bit FNV-1a state."""
    for b in data:
        h = ((h ^ b) * FNV_PRIME) & _MASK64
    return h


def format_checksum(h: int) -> str:
    return f"0x{h:016x}"


def obs_bytes(obs: np.ndarray) -> bytes:
    """Row-major little-endian byte encoding of one observation tensor."""
    arr = np.ascontiguousarray(obs)
    return arr.astype(byte_order_code(from_numpy(arr.dtype)), copy=False).tobytes()


@dataclass
class RunReport:
    total_steps: int
    wall_seconds: float
    steps_per_second: float
    obs_checksum: str
    reward_sum: float

    def to_json_dict(self) -> dict:
        return {
            "total_steps": self.total_steps,
            "wall_seconds": self.wall_seconds,
            "steps_per_second": self.steps_per_second,
            "obs_checksum": self.obs_checksum,
            "reward_sum": self.reward_sum,
        }


def _zero_action(space):
    if isinstance(space, DiscreteSpace):
        return 0
    return np.zeros(space.shape, dtype=space.low.dtype)


class _Run:
    """Shared stepping loop for single-agent and parallel chains."""

    def __init__(self, env, config: ChainConfig, checked: bool):
        self.env = env
        self.config = config
        self.checked = checked
        self.policy_rng = Pcg32(config.seed)
        self.chunks: list = []
        self.reward_sum = 0.0

    def _check_obs(self, space, obs, where: str):
        if self.checked and not space_contains(space, obs):
            raise RuntimeFailure(f"{where}: observation left its declared space {space!r}")

    def run(self) -> None:
        if isinstance(self.env, ParallelEnv):
            self._run_parallel()
        else:
            self._run_single()

    def _run_single(self) -> None:
        env, cfg = self.env, self.config
        obs = env.reset(cfg.seed)
        self.chunks.append(obs_bytes(obs))
        self._check_obs(env.observation_space, obs, "reset")
        done = False
        for _ in range(cfg.steps):
            if done:
                obs = env.reset()
                self.chunks.append(obs_bytes(obs))
                self._check_obs(env.observation_space, obs, "auto-reset")
            if cfg.policy == "zeros":
                action = _zero_action(env.action_space)
            else:
                action = sample_space(env.action_space, self.policy_rng)
            res = env.step(action)
            done = res.done
            self.reward_sum += res.reward
            self.chunks.append(obs_bytes(res.observation))
            self._check_obs(env.observation_space, res.observation, "step")

    def _run_parallel(self) -> None:
        env, cfg = self.env, self.config
        obs_map = env.reset(cfg.seed)
        for agent, obs in obs_map.items():
            self.chunks.append(obs_bytes(obs))
            self._check_obs(env.observation_space(agent), obs, f"reset[{agent}]")
        for _ in range(cfg.steps):
            if not env.agents:
                obs_map = env.reset()
                for agent, obs in obs_map.items():
                    self.chunks.append(obs_bytes(obs))
                    self._check_obs(env.observation_space(agent), obs, f"auto-reset[{agent}]")
            actions = {}
            for agent in env.agents:
                if cfg.policy == "zeros":
                    actions[agent] = _zero_action(env.action_space(agent))
                else:
                    actions[agent] = sample_space(env.action_space(agent), self.policy_rng)
            results = env.step(actions)
            for agent, res in results.items():
                self.reward_sum += res.reward
                self.chunks.append(obs_bytes(res.observation))
                self._check_obs(env.observation_space(agent), res.observation, f"step[{agent}]")


def run_benchmark(config: ChainConfig, checked: bool = False) -> RunReport:
    """Build the chain, step it exactly ``config.steps`` times, and report.

    Episodes auto-reset: the first reset uses config.seed, later resets are
    unseeded.  The zeros policy submits all-zero actions; the random policy
    draws from a PCG32 stream seeded with config.seed (per agent in roster
    order for parallel envs).
    """
    env = build_chain(config)
    run = _Run(env, config, checked)
    start = time.perf_counter()
    try:
        run.run()
    except EnvwrapsError:
        raise
    except Exception as e:
        raise RuntimeFailure(f"chain raised while stepping: {e!r}") from e
    wall = time.perf_counter() - start
    h = FNV_OFFSET
    for chunk in run.chunks:
        h = fnv1a64(chunk, h)
    wall = max(wall, 1e-9)
    return RunReport(
        total_steps=config.steps,
        wall_seconds=wall,
        steps_per_second=config.steps / wall,
        obs_checksum=format_checksum(h),
        reward_sum=run.reward_sum,
    )
