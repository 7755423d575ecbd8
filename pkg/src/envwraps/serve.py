"""Line-oriented stdio protocol exposing env chains to foreign processes.

This is the wire interface external bindings adapt: one JSON object per line,
request/reply in lockstep.  Requests:

    {"op": "init", "env": {"name": ..., <params>}, "wrappers": [{"name": ..., <params>}]}
    {"op": "init", "host": {"observation_space": S, "action_space": S}, "wrappers": [...]}
    {"op": "reset", "seed": <u64 or null>}
    {"op": "step", "action": A}            (single-agent)
    {"op": "step", "actions": {agent: A}}  (parallel)
    {"op": "close"}

Replies carry {"ok": true, ...} or {"ok": false, "error": "<ErrorClass>",
"message": ...}.  init answers with the transformed spaces (and the roster for
parallel envs); reset/step answer with observation tensors and step results.

Tensors are {"dtype": "u8|i32|f32|f64", "shape": [...], "data": [<flat
row-major>]}; Box spaces are {"kind": "box", "dtype", "shape", "low", "high"
(flat)}; Discrete is {"kind": "discrete", "n"}.  Discrete actions are plain
integers, Box actions are tensors.

In host mode the chain's innermost env lives on the *client* side: when the
server needs it, it emits {"cb": "reset", "seed": ...} or {"cb": "step",
"action": A} and reads one reply line ({"observation": T} resp.
{"observation": T, "reward": r, "done": b, "info": {...}}).  Every host value
is copied and validated into a fresh tensor on arrival; malformed values raise
a boundary error naming the offending field.  Host envs never see library
tensors by reference, so nothing is mutated in place across the boundary.
"""

import json
import math
import sys

import numpy as np

from .chain import WRAPPERS, WrapperSpec, _ENVS, _validate_params, apply_chain
from .dtypes import DTYPES, to_numpy
from .env import Env, ParallelEnv, StepResult
from .envs import make_reference_env
from .errors import EnvwrapsError, ValidationError
from .spaces import BoxSpace, DiscreteSpace

__all__ = ["encode_tensor", "decode_tensor", "encode_space", "decode_space", "serve"]


def encode_tensor(arr: np.ndarray) -> dict:
    from .dtypes import from_numpy

    return {
        "dtype": from_numpy(arr.dtype),
        "shape": list(arr.shape),
        "data": np.ascontiguousarray(arr).ravel().tolist(),
    }


def _fail(field: str, why: str):
    raise ValidationError(f"{field}: {why}")


def decode_tensor(doc, field: str) -> np.ndarray:
    """Copy+validate a wire tensor into a fresh array; errors name ``field``."""
    if not isinstance(doc, dict):
        _fail(field, "must be a tensor object")
    extra = set(doc) - {"dtype", "shape", "data"}
    if extra:
        _fail(field, f"unknown keys {sorted(extra)}")
    dtype = doc.get("dtype")
    if dtype not in DTYPES:
        _fail(f"{field}.dtype", f"must be one of {DTYPES}, got {dtype!r}")
    shape = doc.get("shape")
    if (not isinstance(shape, list)
            or any(not isinstance(d, int) or isinstance(d, bool) or d < 1 for d in shape)):
        _fail(f"{field}.shape", f"must be a list of integers >= 1, got {shape!r}")
    data = doc.get("data")
    n = 1
    for d in shape:
        n *= d
    if not isinstance(data, list) or len(data) != n:
        _fail(f"{field}.data", f"must be a flat list of {n} numbers")
    if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in data):
        _fail(f"{field}.data", "must contain numbers only")
    if dtype in ("u8", "i32"):
        info = np.iinfo(to_numpy(dtype))
        for v in data:
            if not isinstance(v, int) or not info.min <= v <= info.max:
                _fail(f"{field}.data", f"value {v!r} is not a {dtype} integer")
    arr = np.array(data, dtype=np.float64).reshape(shape)
    return arr.astype(to_numpy(dtype))


def encode_space(space) -> dict:
    if isinstance(space, DiscreteSpace):
        return {"kind": "discrete", "n": space.n}
    return {
        "kind": "box",
        "dtype": space.dtype,
        "shape": list(space.shape),
        "low": space.low.ravel().tolist(),
        "high": space.high.ravel().tolist(),
    }


def decode_space(doc, field: str):
    if not isinstance(doc, dict) or "kind" not in doc:
        _fail(field, "must be a space object with a 'kind'")
    if doc["kind"] == "discrete":
        n = doc.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            _fail(f"{field}.n", f"must be an integer >= 1, got {n!r}")
        return DiscreteSpace(n)
    if doc["kind"] == "box":
        dtype = doc.get("dtype")
        if dtype not in DTYPES:
            _fail(f"{field}.dtype", f"must be one of {DTYPES}, got {dtype!r}")
        shape = doc.get("shape")
        if (not isinstance(shape, list) or not shape
                or any(not isinstance(d, int) or isinstance(d, bool) or d < 1 for d in shape)):
            _fail(f"{field}.shape", f"must be a non-empty list of integers >= 1")
        lo = decode_tensor({"dtype": dtype, "shape": shape, "data": doc.get("low")},
                           f"{field}.low")
        hi = decode_tensor({"dtype": dtype, "shape": shape, "data": doc.get("high")},
                           f"{field}.high")
        return BoxSpace(lo, hi, dtype=dtype)
    _fail(f"{field}.kind", f"must be 'box' or 'discrete', got {doc['kind']!r}")


def _decode_action(value, space, field: str):
    if isinstance(space, DiscreteSpace):
        if not isinstance(value, int) or isinstance(value, bool):
            _fail(field, f"discrete action must be an integer, got {value!r}")
        return value
    return decode_tensor(value, field)


def _decode_step_reply(doc: dict, obs_space) -> StepResult:
    if not isinstance(doc, dict):
        _fail("host_step", "reply must be an object")
    obs = _decode_host_obs(doc.get("observation"), obs_space)
    reward = doc.get("reward")
    if isinstance(reward, bool) or not isinstance(reward, (int, float)) or not math.isfinite(reward):
        _fail("host_step.reward", f"must be a finite number, got {reward!r}")
    done = doc.get("done")
    if not isinstance(done, bool):
        _fail("host_step.done", f"must be a boolean, got {done!r}")
    info = doc.get("info", {})
    if (not isinstance(info, dict)
            or any(not isinstance(k, str) or not isinstance(v, str) for k, v in info.items())):
        _fail("host_step.info", "must be a string-to-string mapping")
    return StepResult(obs, float(reward), done, info)


def _decode_host_obs(doc, obs_space) -> np.ndarray:
    obs = decode_tensor(doc, "host observation")
    from .dtypes import from_numpy

    if tuple(obs.shape) != tuple(obs_space.shape) or from_numpy(obs.dtype) != obs_space.dtype:
        _fail(
            "host observation",
            f"shape/dtype {obs.shape} {from_numpy(obs.dtype)} does not match the "
            f"declared space {obs_space.shape} {obs_space.dtype}",
        )
    return obs


class _HostProxyEnv(Env):
    """Client-side env driven through cb lines on the server's own pipes."""

    def __init__(self, server, observation_space, action_space):
        self._server = server
        self.observation_space = observation_space
        self.action_space = action_space

    def reset(self, seed: int | None = None) -> np.ndarray:
        reply = self._server.callback({"cb": "reset", "seed": seed})
        if not isinstance(reply, dict) or "observation" not in reply:
            _fail("host_reset", "reply must carry an 'observation'")
        return _decode_host_obs(reply["observation"], self.observation_space)

    def step(self, action) -> StepResult:
        reply = self._server.callback(
            {"cb": "step", "action": _encode_action(action)}
        )
        return _decode_step_reply(reply, self.observation_space)


def _encode_action(action):
    if isinstance(action, np.ndarray):
        return encode_tensor(action)
    return int(action)


class Server:
    def __init__(self, stdin=None, stdout=None):
        self._in = stdin if stdin is not None else sys.stdin
        self._out = stdout if stdout is not None else sys.stdout
        self._env = None
        self._parallel = False

    # -- transport -------------------------------------------------------

    def _write(self, doc: dict) -> None:
        self._out.write(json.dumps(doc) + "\n")
        self._out.flush()

    def _read(self):
        line = self._in.readline()
        if line == "":
            return None
        return json.loads(line)

    def callback(self, request: dict):
        self._write(request)
        reply = self._read()
        if reply is None:
            raise EOFError("client hung up mid-callback")
        return reply

    # -- request handlers ------------------------------------------------

    def _handle_init(self, doc: dict):
        wrappers = []
        for idx, w in enumerate(doc.get("wrappers", [])):
            if not isinstance(w, dict) or "name" not in w:
                raise ValidationError(f"wrapper #{idx} must be an object with a 'name'")
            w = dict(w)
            name = w.pop("name")
            if name not in WRAPPERS:
                raise ValidationError(f"unknown wrapper {name!r}")
            schema, _ = WRAPPERS[name]
            wrappers.append(WrapperSpec(name, _validate_params("wrapper", name, schema, w)))

        if "host" in doc:
            host = doc["host"]
            if not isinstance(host, dict):
                raise ValidationError("'host' must be an object")
            obs_space = decode_space(host.get("observation_space"), "host.observation_space")
            act_space = decode_space(host.get("action_space"), "host.action_space")
            base = _HostProxyEnv(self, obs_space, act_space)
        elif "env" in doc:
            env_doc = dict(doc["env"])
            name = env_doc.pop("name", None)
            if name not in _ENVS:
                raise ValidationError(f"unknown env {name!r}")
            params = _validate_params("env", name, _ENVS[name], env_doc)
            if name == "multi_counter" and params.get("agents") is None:
                params.pop("agents", None)
            base = make_reference_env(name, params)
        else:
            raise ValidationError("init needs an 'env' or a 'host'")

        env = apply_chain(base, wrappers)
        self._env = env
        self._parallel = isinstance(env, ParallelEnv)
        if self._parallel:
            return {
                "ok": True,
                "parallel": True,
                "agents": list(env.agents),
                "observation_spaces": {a: encode_space(env.observation_space(a)) for a in env.agents},
                "action_spaces": {a: encode_space(env.action_space(a)) for a in env.agents},
            }
        return {
            "ok": True,
            "parallel": False,
            "observation_space": encode_space(env.observation_space),
            "action_space": encode_space(env.action_space),
        }

    def _require_env(self):
        if self._env is None:
            raise ValidationError("no env: send 'init' first")
        return self._env

    def _handle_reset(self, doc: dict):
        env = self._require_env()
        seed = doc.get("seed")
        if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)
                                 or not 0 <= seed < 1 << 64):
            raise ValidationError(f"'seed' must be a u64 or null, got {seed!r}")
        if self._parallel:
            obs_map = env.reset(seed)
            return {
                "ok": True,
                "agents": list(env.agents),
                "observations": {a: encode_tensor(o) for a, o in obs_map.items()},
            }
        return {"ok": True, "observation": encode_tensor(env.reset(seed))}

    def _handle_step(self, doc: dict):
        env = self._require_env()
        if self._parallel:
            raw = doc.get("actions")
            if not isinstance(raw, dict):
                raise ValidationError("parallel step needs an 'actions' mapping")
            actions = {
                agent: _decode_action(v, env.action_space(agent), f"actions[{agent}]")
                for agent, v in raw.items() if agent in env.agents
            }
            unknown = [a for a in raw if a not in env.agents]
            if unknown:
                raise ValidationError(f"actions for unknown/done agents {unknown}")
            results = env.step(actions)
            return {
                "ok": True,
                "agents": list(env.agents),
                "results": {
                    a: {
                        "observation": encode_tensor(r.observation),
                        "reward": r.reward,
                        "done": r.done,
                        "info": r.info,
                    }
                    for a, r in results.items()
                },
            }
        if "action" not in doc:
            raise ValidationError("step needs an 'action'")
        action = _decode_action(doc["action"], env.action_space, "action")
        res = env.step(action)
        return {
            "ok": True,
            "observation": encode_tensor(res.observation),
            "reward": res.reward,
            "done": res.done,
            "info": res.info,
        }

    # -- main loop -------------------------------------------------------

    def serve_forever(self) -> int:
        while True:
            try:
                doc = self._read()
            except json.JSONDecodeError as e:
                self._write({"ok": False, "error": "ParseError", "message": str(e)})
                continue
            if doc is None:
                return 0
            try:
                if not isinstance(doc, dict) or "op" not in doc:
                    raise ValidationError("request must be an object with an 'op'")
                op = doc["op"]
                if op == "close":
                    self._write({"ok": True})
                    return 0
                if op == "init":
                    reply = self._handle_init(doc)
                elif op == "reset":
                    reply = self._handle_reset(doc)
                elif op == "step":
                    reply = self._handle_step(doc)
                else:
                    raise ValidationError(f"unknown op {op!r}")
            except EnvwrapsError as e:
                reply = {"ok": False, "error": type(e).__name__, "message": str(e)}
            except EOFError as e:
                print(f"serve: {e}", file=sys.stderr)
                return 2
            self._write(reply)


def serve(stdin=None, stdout=None) -> int:
    return Server(stdin, stdout).serve_forever()
