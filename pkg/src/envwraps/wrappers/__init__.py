from .action import clip_actions, sticky_actions
from .base import KernelEnv, ParallelKernelEnv, lift_to_parallel
from .lambdas import action_lambda, observation_lambda, reward_lambda
from .multiagent import agent_indicator, pad_action_space, pad_observations
from .observation import (
    color_reduction,
    delay_observations,
    dtype_cast,
    flatten,
    frame_skip,
    frame_stack,
    normalize_obs,
    reshape,
    resize,
)
from .reward import clip_reward

__all__ = [
    "clip_actions",
    "sticky_actions",
    "KernelEnv",
    "ParallelKernelEnv",
    "lift_to_parallel",
    "action_lambda",
    "observation_lambda",
    "reward_lambda",
    "agent_indicator",
    "pad_action_space",
    "pad_observations",
    "color_reduction",
    "delay_observations",
    "dtype_cast",
    "flatten",
    "frame_skip",
    "frame_stack",
    "normalize_obs",
    "reshape",
    "resize",
    "clip_reward",
]
