"""Composable environment wrappers for reinforcement learning.

Each wrapper is a function taking an environment and returning a wrapped one;
single-agent wrappers lift automatically over parallel multi-agent envs with
independent per-agent state.  Deterministic reference envs, a benchmark CLI
with bit-exact trajectory checksums, and a stdio serving protocol round out
the package.
"""

from .bench import RunReport, fnv1a64, format_checksum, obs_bytes, run_benchmark
from .chain import ChainConfig, WrapperSpec, apply_chain, build_chain, parse_config
from .env import Env, ParallelEnv, StepResult
from .envs import CounterEnv, GradientPixelEnv, MultiCounterEnv, make_reference_env
from .errors import (
    ContainmentViolation,
    EnvwrapsError,
    InvalidParam,
    MalformedAgentId,
    NonFiniteReward,
    ParseError,
    PreconditionFailed,
    ResetNeeded,
    RuntimeFailure,
    ShapeMismatch,
    SpaceInferenceFailed,
    UnknownEnv,
    ValidationError,
)
from .rng import Pcg32
from .spaces import BoxSpace, DiscreteSpace, sample_space, space_contains
from .wrappers import (
    agent_indicator,
    action_lambda,
    clip_actions,
    clip_reward,
    color_reduction,
    delay_observations,
    dtype_cast,
    flatten,
    frame_skip,
    frame_stack,
    lift_to_parallel,
    normalize_obs,
    observation_lambda,
    pad_action_space,
    pad_observations,
    reshape,
    resize,
    reward_lambda,
    sticky_actions,
)

__version__ = "0.1.0"

__all__ = [
    "RunReport", "fnv1a64", "format_checksum", "obs_bytes", "run_benchmark",
    "ChainConfig", "WrapperSpec", "apply_chain", "build_chain", "parse_config",
    "Env", "ParallelEnv", "StepResult",
    "CounterEnv", "GradientPixelEnv", "MultiCounterEnv", "make_reference_env",
    "EnvwrapsError", "PreconditionFailed", "InvalidParam", "ShapeMismatch",
    "SpaceInferenceFailed", "ContainmentViolation", "NonFiniteReward",
    "MalformedAgentId", "UnknownEnv", "ParseError", "ValidationError",
    "ResetNeeded", "RuntimeFailure",
    "Pcg32",
    "BoxSpace", "DiscreteSpace", "sample_space", "space_contains",
    "agent_indicator", "action_lambda", "clip_actions", "clip_reward",
    "color_reduction", "delay_observations", "dtype_cast", "flatten",
    "frame_skip", "frame_stack", "lift_to_parallel", "normalize_obs",
    "observation_lambda", "pad_action_space", "pad_observations", "reshape",
    "resize", "reward_lambda", "sticky_actions",
]
