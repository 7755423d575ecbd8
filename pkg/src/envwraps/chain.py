"""Serializable chain configs: parse, validate, and build env+wrapper stacks.

A chain config is a JSON object:

    {"env": {"name": "counter", "T": 100, "d": 4},
     "wrappers": [{"name": "frame_stack", "N": 3}],
     "steps": 1000, "seed": 7, "policy": "zeros"}

Wrapper params sit inline next to "name".  The first listed wrapper is the
innermost.  Unknown keys anywhere are rejected.  Lambda wrappers take host
callables and are deliberately absent from the registry.
"""

import json
from dataclasses import dataclass, field

from .envs import make_reference_env
from .errors import ParseError, PreconditionFailed, ValidationError
from .wrappers.action import clip_actions, sticky_actions
from .wrappers.multiagent import agent_indicator, pad_action_space, pad_observations
from .wrappers.observation import (
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
from .wrappers.reward import clip_reward

__all__ = ["WrapperSpec", "ChainConfig", "WRAPPERS", "parse_config", "build_chain", "apply_chain"]


@dataclass
class WrapperSpec:
    name: str
    params: dict = field(default_factory=dict)


@dataclass
class ChainConfig:
    env_name: str
    env_params: dict
    wrappers: list
    steps: int
    seed: int
    policy: str


# ---------------------------------------------------------------- param schemas

def _p_int(v, minimum=None):
    if not isinstance(v, int) or isinstance(v, bool):
        return None, "must be an integer"
    if minimum is not None and v < minimum:
        return None, f"must be >= {minimum}"
    return v, None


def _p_float(v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        return None, "must be a number"
    return float(v), None


def _p_str(choices):
    def check(v):
        if not isinstance(v, str):
            return None, "must be a string"
        if v not in choices:
            return None, f"must be one of {sorted(choices)}"
        return v, None
    return check


def _p_bool(v):
    if not isinstance(v, bool):
        return None, "must be a boolean"
    return v, None


def _p_u64(v):
    if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < 1 << 64:
        return None, "must be an integer in [0, 2**64)"
    return v, None


def _p_shape(v):
    if (not isinstance(v, list) or not v
            or any(not isinstance(d, int) or isinstance(d, bool) or d < 1 for d in v)):
        return None, "must be a non-empty list of integers >= 1"
    return v, None


def _p_skip(v):
    if isinstance(v, int) and not isinstance(v, bool):
        if v < 1:
            return None, "must be >= 1"
        return v, None
    if isinstance(v, list) and len(v) == 2:
        lo, hi = v
        ok = all(isinstance(x, int) and not isinstance(x, bool) for x in (lo, hi))
        if ok and 1 <= lo <= hi:
            return (lo, hi), None
    return None, "must be an int >= 1 or a [lo, hi] pair with 1 <= lo <= hi"


def _p_agents(v):
    if not isinstance(v, list) or not v:
        return None, "must be a non-empty list of [id, obs_dim, n_actions] triples"
    out = []
    for entry in v:
        if (not isinstance(entry, list) or len(entry) != 3
                or not isinstance(entry[0], str)
                or any(not isinstance(x, int) or isinstance(x, bool) or x < 1 for x in entry[1:])):
            return None, f"bad agent spec {entry!r}; expected [id, obs_dim, n_actions]"
        out.append((entry[0], entry[1], entry[2]))
    return out, None


_REQUIRED = object()

# name -> {param: (checker, default)}; default _REQUIRED means the key must appear
_ENVS = {
    "counter": {"T": (lambda v: _p_int(v, 1), 100), "d": (lambda v: _p_int(v, 1), 4)},
    "pixel": {
        "H": (lambda v: _p_int(v, 1), 16),
        "W": (lambda v: _p_int(v, 1), 16),
        "T": (lambda v: _p_int(v, 1), 100),
    },
    "multi_counter": {"agents": (_p_agents, None), "T": (lambda v: _p_int(v, 1), 100)},
}

WRAPPERS = {
    "color_reduction": (
        {"mode": (_p_str({"full", "R", "G", "B"}), "full")},
        lambda env, p: color_reduction(env, p["mode"]),
    ),
    "resize": (
        {
            "out_h": (lambda v: _p_int(v, 1), _REQUIRED),
            "out_w": (lambda v: _p_int(v, 1), _REQUIRED),
            "interp": (_p_str({"nearest", "bilinear"}), "nearest"),
        },
        lambda env, p: resize(env, p["out_h"], p["out_w"], p["interp"]),
    ),
    "dtype": (
        {"target": (_p_str({"u8", "i32", "f32", "f64"}), _REQUIRED)},
        lambda env, p: dtype_cast(env, p["target"]),
    ),
    "flatten": ({}, lambda env, p: flatten(env)),
    "reshape": (
        {"new_shape": (_p_shape, _REQUIRED)},
        lambda env, p: reshape(env, p["new_shape"]),
    ),
    "normalize_obs": (
        {"out_min": (_p_float, 0.0), "out_max": (_p_float, 1.0)},
        lambda env, p: normalize_obs(env, p["out_min"], p["out_max"]),
    ),
    "frame_stack": (
        {"N": (lambda v: _p_int(v, 1), _REQUIRED),
         "fill_mode": (_p_str({"zero", "repeat_first"}), "zero")},
        lambda env, p: frame_stack(env, p["N"], p["fill_mode"]),
    ),
    "frame_skip": (
        {"skip": (_p_skip, _REQUIRED), "seed": (_p_u64, 0)},
        lambda env, p: frame_skip(env, p["skip"], p["seed"]),
    ),
    "delay": (
        {"delay": (lambda v: _p_int(v, 0), _REQUIRED)},
        lambda env, p: delay_observations(env, p["delay"]),
    ),
    "clip_actions": ({}, lambda env, p: clip_actions(env)),
    "sticky_actions": (
        {"p": (_p_float, _REQUIRED), "seed": (_p_u64, 0)},
        lambda env, p: sticky_actions(env, p["p"], p["seed"]),
    ),
    "clip_reward": (
        {"lower": (_p_float, -1.0), "upper": (_p_float, 1.0)},
        lambda env, p: clip_reward(env, p["lower"], p["upper"]),
    ),
    "agent_indicator": (
        {"type_only": (_p_bool, False)},
        lambda env, p: agent_indicator(env, p["type_only"]),
    ),
    "pad_observations": ({}, lambda env, p: pad_observations(env)),
    "pad_action_space": ({}, lambda env, p: pad_action_space(env)),
}


def _validate_params(kind: str, name: str, schema: dict, given: dict) -> dict:
    out = {}
    for key, value in given.items():
        if key not in schema:
            raise ValidationError(f"{kind} {name!r}: unknown param {key!r}")
        checker, _ = schema[key]
        parsed, err = checker(value)
        if err is not None:
            raise ValidationError(f"{kind} {name!r}: param {key!r} {err}, got {value!r}")
        out[key] = parsed
    for key, (_, default) in schema.items():
        if key not in out:
            if default is _REQUIRED:
                raise ValidationError(f"{kind} {name!r}: missing required param {key!r}")
            out[key] = default
    return out


def parse_config(text: str) -> ChainConfig:
    """Parse and fully validate a chain config document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise ValidationError("config root must be a JSON object")
    allowed = {"env", "wrappers", "steps", "seed", "policy"}
    for key in doc:
        if key not in allowed:
            raise ValidationError(f"unknown config key {key!r}")
    if "env" not in doc or not isinstance(doc["env"], dict):
        raise ValidationError("config needs an 'env' object")
    env_doc = dict(doc["env"])
    env_name = env_doc.pop("name", None)
    if env_name not in _ENVS:
        raise ValidationError(f"unknown env {env_name!r}; expected one of {sorted(_ENVS)}")
    env_params = _validate_params("env", env_name, _ENVS[env_name], env_doc)
    if env_name == "multi_counter" and env_params.get("agents") is None:
        env_params.pop("agents", None)

    wrappers = []
    for idx, w in enumerate(doc.get("wrappers", [])):
        if not isinstance(w, dict) or "name" not in w:
            raise ValidationError(f"wrapper #{idx} must be an object with a 'name'")
        w = dict(w)
        w_name = w.pop("name")
        if w_name not in WRAPPERS:
            raise ValidationError(
                f"unknown wrapper {w_name!r}; expected one of {sorted(WRAPPERS)}"
            )
        schema, _ = WRAPPERS[w_name]
        wrappers.append(WrapperSpec(w_name, _validate_params("wrapper", w_name, schema, w)))

    if "steps" not in doc:
        raise ValidationError("config needs 'steps'")
    steps, err = _p_int(doc["steps"], 1)
    if err is not None:
        raise ValidationError(f"'steps' {err}, got {doc['steps']!r}")
    seed, err = _p_u64(doc.get("seed", 0))
    if err is not None:
        raise ValidationError(f"'seed' {err}, got {doc.get('seed')!r}")
    policy = doc.get("policy", "zeros")
    if policy not in ("zeros", "random"):
        raise ValidationError(f"'policy' must be 'zeros' or 'random', got {policy!r}")
    return ChainConfig(env_name, env_params, wrappers, steps, seed, policy)


def apply_chain(env, wrappers: list):
    """Apply WrapperSpecs in order (first is innermost)."""
    for idx, spec in enumerate(wrappers):
        _, build = WRAPPERS[spec.name]
        try:
            env = build(env, spec.params)
        except PreconditionFailed as e:
            raise PreconditionFailed(f"wrapper #{idx} ({spec.name}): {e}") from None
    return env


def build_chain(config: ChainConfig):
    """Instantiate the env and its wrapper chain; preconditions fire here."""
    env = make_reference_env(config.env_name, config.env_params)
    return apply_chain(env, config.wrappers)
