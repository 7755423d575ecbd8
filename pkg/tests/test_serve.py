"""Stdio protocol: scripted sessions in-process, interactive ones via subprocess."""

import io
import json
import subprocess
import sys

import numpy as np
import pytest

from envwraps import ValidationError
from envwraps.serve import decode_space, decode_tensor, encode_space, encode_tensor, serve
from envwraps.spaces import BoxSpace, DiscreteSpace


def run_session(lines):
    """Feed pre-scripted client lines; returns (exit_code, output_lines)."""
    text = "".join(l if isinstance(l, str) else json.dumps(l) for l in lines)
    out = io.StringIO()
    rc = serve(io.StringIO(text), out)
    return rc, [json.loads(s) for s in out.getvalue().splitlines()]


def jline(doc):
    return json.dumps(doc) + "\n"


T = lambda data, dtype="f32", shape=None: {
    "dtype": dtype,
    "shape": shape or [len(data)],
    "data": data,
}


# ------------------------------------------------------------- tensor/space IO


def test_tensor_roundtrip():
    for arr in (
        np.arange(6, dtype=np.uint8).reshape(2, 3),
        np.array([1.5, -2.5], dtype=np.float32),
        np.array([[1], [2]], dtype=np.int32),
    ):
        doc = encode_tensor(arr)
        back = decode_tensor(doc, "x")
        assert np.array_equal(back, arr) and back.dtype == arr.dtype


def test_decode_tensor_validation():
    good = {"dtype": "f32", "shape": [2], "data": [1.0, 2.0]}
    with pytest.raises(ValidationError, match="x.dtype"):
        decode_tensor(dict(good, dtype="f16"), "x")
    with pytest.raises(ValidationError, match="x.shape"):
        decode_tensor(dict(good, shape=[0]), "x")
    with pytest.raises(ValidationError, match="x.shape"):
        decode_tensor(dict(good, shape=[True]), "x")
    with pytest.raises(ValidationError, match="x.data"):
        decode_tensor(dict(good, data=[1.0]), "x")
    with pytest.raises(ValidationError, match="x.data"):
        decode_tensor(dict(good, data=[1.0, "2"]), "x")
    with pytest.raises(ValidationError, match="x.data"):
        decode_tensor(dict(good, data=[1.0, True]), "x")
    with pytest.raises(ValidationError, match="unknown keys"):
        decode_tensor(dict(good, extra=1), "x")
    with pytest.raises(ValidationError, match="u8 integer"):
        decode_tensor({"dtype": "u8", "shape": [1], "data": [256]}, "x")
    with pytest.raises(ValidationError, match="u8 integer"):
        decode_tensor({"dtype": "u8", "shape": [1], "data": [1.5]}, "x")
    with pytest.raises(ValidationError, match="must be a tensor object"):
        decode_tensor([1, 2], "x")


def test_space_roundtrip():
    for sp in (
        BoxSpace(0, 255, shape=(2, 2), dtype="u8"),
        BoxSpace(-1.0, 1.0, shape=(3,), dtype="f32"),
        DiscreteSpace(7),
    ):
        assert decode_space(encode_space(sp), "s") == sp


def test_decode_space_validation():
    with pytest.raises(ValidationError, match="s.kind"):
        decode_space({"kind": "simplex"}, "s")
    with pytest.raises(ValidationError, match="s.n"):
        decode_space({"kind": "discrete", "n": 0}, "s")
    with pytest.raises(ValidationError, match="s.low"):
        decode_space(
            {"kind": "box", "dtype": "f32", "shape": [2], "low": [0.0], "high": [1.0, 1.0]},
            "s",
        )


# ---------------------------------------------------------- scripted sessions


def test_single_agent_session():
    rc, replies = run_session([
        jline({"op": "init", "env": {"name": "counter", "T": 5, "d": 2}}),
        jline({"op": "reset", "seed": 0}),
        jline({"op": "step", "action": T([0.0])}),
        jline({"op": "close"}),
    ])
    assert rc == 0
    init, reset, step, close = replies
    assert init["ok"] and init["parallel"] is False
    assert init["observation_space"] == {
        "kind": "box", "dtype": "f32", "shape": [2],
        "low": [0.0, 0.0], "high": [5.0, 5.0],
    }
    assert reset["observation"]["data"] == [0.0, 0.0]
    assert step["observation"]["data"] == [1.0, 1.0]
    assert step["reward"] == 1.0 and step["done"] is False
    assert step["info"] == {"t": "1"}
    assert close == {"ok": True}


def test_init_applies_wrappers():
    rc, replies = run_session([
        jline({"op": "init", "env": {"name": "counter", "T": 5, "d": 2},
               "wrappers": [{"name": "frame_stack", "N": 3}]}),
        jline({"op": "reset", "seed": 0}),
        jline({"op": "close"}),
    ])
    assert rc == 0
    assert replies[0]["observation_space"]["shape"] == [6]
    assert replies[1]["observation"]["data"] == [0.0] * 6


def test_parallel_session():
    rc, replies = run_session([
        jline({"op": "init", "env": {"name": "multi_counter"}}),
        jline({"op": "reset", "seed": 3}),
        jline({"op": "step", "actions": {"pursuer_0": 2, "pursuer_1": 0, "evader_0": 1}}),
        jline({"op": "close"}),
    ])
    assert rc == 0
    init, reset, step, _ = replies
    assert init["parallel"] is True
    assert init["agents"] == ["pursuer_0", "pursuer_1", "evader_0"]
    assert init["action_spaces"]["evader_0"] == {"kind": "discrete", "n": 2}
    assert init["observation_spaces"]["evader_0"]["shape"] == [5]
    assert reset["observations"]["pursuer_0"]["data"] == [0.0, 0.0, 0.0]
    assert step["results"]["pursuer_0"]["reward"] == 2.0
    assert step["results"]["evader_0"]["observation"]["data"] == [1.0] * 5
    assert list(step["results"]) == ["pursuer_0", "pursuer_1", "evader_0"]


def test_step_before_init_recovers():
    rc, replies = run_session([
        jline({"op": "step", "action": 0}),
        jline({"op": "init", "env": {"name": "counter"}}),
        jline({"op": "close"}),
    ])
    assert rc == 0
    assert replies[0]["ok"] is False
    assert replies[0]["error"] == "ValidationError"
    assert "init" in replies[0]["message"]
    assert replies[1]["ok"] is True


def test_bad_json_line_yields_parse_error_and_continues():
    rc, replies = run_session([
        "{nope\n",
        jline({"op": "init", "env": {"name": "counter"}}),
        jline({"op": "close"}),
    ])
    assert rc == 0
    assert replies[0] == {
        "ok": False, "error": "ParseError", "message": replies[0]["message"],
    }
    assert replies[1]["ok"] is True


def test_unknown_op_and_bad_seed():
    rc, replies = run_session([
        jline({"op": "init", "env": {"name": "counter"}}),
        jline({"op": "poke"}),
        jline({"op": "reset", "seed": -1}),
        jline({"op": "reset", "seed": True}),
        jline({"op": "close"}),
    ])
    assert rc == 0
    assert replies[1]["error"] == "ValidationError" and "poke" in replies[1]["message"]
    assert "seed" in replies[2]["message"]
    assert "seed" in replies[3]["message"]


def test_discrete_action_must_be_plain_int():
    rc, replies = run_session([
        jline({"op": "init", "env": {"name": "pixel", "H": 2, "W": 2}}),
        jline({"op": "reset", "seed": 0}),
        jline({"op": "step", "action": T([1], dtype="i32")}),
        jline({"op": "close"}),
    ])
    assert replies[2]["ok"] is False
    assert "action" in replies[2]["message"]


def test_box_action_dtype_error_names_field():
    rc, replies = run_session([
        jline({"op": "init", "env": {"name": "counter"}}),
        jline({"op": "reset", "seed": 0}),
        jline({"op": "step", "action": {"dtype": "f16", "shape": [1], "data": [0.0]}}),
        jline({"op": "close"}),
    ])
    assert replies[2]["error"] == "ValidationError"
    assert "action.dtype" in replies[2]["message"]


def test_parallel_step_rejects_unknown_agent():
    rc, replies = run_session([
        jline({"op": "init", "env": {"name": "multi_counter"}}),
        jline({"op": "reset", "seed": 0}),
        jline({"op": "step", "actions": {"pursuer_0": 0, "pursuer_1": 0,
                                         "evader_0": 0, "ghost_9": 0}}),
        jline({"op": "close"}),
    ])
    assert replies[2]["ok"] is False and "ghost_9" in replies[2]["message"]


def test_parallel_step_missing_agent_is_env_error():
    rc, replies = run_session([
        jline({"op": "init", "env": {"name": "multi_counter"}}),
        jline({"op": "reset", "seed": 0}),
        jline({"op": "step", "actions": {"pursuer_0": 0}}),
        jline({"op": "close"}),
    ])
    assert replies[2]["ok"] is False
    assert replies[2]["error"] == "InvalidParam"


def test_init_validates_wrapper_params():
    rc, replies = run_session([
        jline({"op": "init", "env": {"name": "counter"},
               "wrappers": [{"name": "frame_stack", "N": 0}]}),
        jline({"op": "close"}),
    ])
    assert replies[0]["ok"] is False
    assert replies[0]["error"] == "ValidationError" and "'N'" in replies[0]["message"]


def test_init_precondition_failure_is_reported():
    rc, replies = run_session([
        jline({"op": "init", "env": {"name": "counter"},
               "wrappers": [{"name": "color_reduction"}]}),
        jline({"op": "close"}),
    ])
    assert replies[0]["error"] == "PreconditionFailed"
    assert "wrapper #0" in replies[0]["message"]


def test_step_after_done_is_reset_needed():
    rc, replies = run_session([
        jline({"op": "init", "env": {"name": "counter", "T": 1, "d": 1}}),
        jline({"op": "reset", "seed": 0}),
        jline({"op": "step", "action": T([0.0])}),
        jline({"op": "step", "action": T([0.0])}),
        jline({"op": "close"}),
    ])
    assert replies[2]["done"] is True
    assert replies[3]["error"] == "ResetNeeded"


# ------------------------------------------------------------------- host mode

HOST_INIT = {
    "op": "init",
    "host": {
        "observation_space": {"kind": "box", "dtype": "f32", "shape": [1],
                              "low": [0.0], "high": [100.0]},
        "action_space": {"kind": "discrete", "n": 3},
    },
    "wrappers": [{"name": "frame_stack", "N": 2}],
}


def test_host_mode_scripted_callbacks():
    rc, out = run_session([
        jline(HOST_INIT),
        jline({"op": "reset", "seed": 42}),
        jline({"observation": T([5.0])}),                     # cb reset reply
        jline({"op": "step", "action": 1}),
        jline({"observation": T([7.0]), "reward": 2.5, "done": False,
               "info": {"k": "v"}}),                          # cb step reply
        jline({"op": "close"}),
    ])
    assert rc == 0
    init, cb_reset, reset, cb_step, step, close = out
    assert init["ok"] and init["observation_space"]["shape"] == [2]
    assert cb_reset == {"cb": "reset", "seed": 42}
    assert reset["observation"]["data"] == [0.0, 5.0]
    assert cb_step == {"cb": "step", "action": 1}
    assert step["observation"]["data"] == [5.0, 7.0]
    assert step["reward"] == 2.5 and step["info"] == {"k": "v"}
    assert close == {"ok": True}


def test_host_malformed_observation_names_field():
    rc, out = run_session([
        jline(HOST_INIT),
        jline({"op": "reset", "seed": 0}),
        jline({"observation": T([1.0, 2.0])}),    # wrong shape vs declared (1,)
        jline({"op": "reset", "seed": 0}),
        jline({"observation": T([3.0])}),
        jline({"op": "close"}),
    ])
    assert rc == 0
    bad = out[2]
    assert bad["ok"] is False and "host observation" in bad["message"]
    assert out[4]["observation"]["data"] == [0.0, 3.0]   # recovered afterwards


def test_host_nonfinite_reward_rejected():
    rc, out = run_session([
        jline(HOST_INIT),
        jline({"op": "reset", "seed": 0}),
        jline({"observation": T([5.0])}),
        jline({"op": "step", "action": 0}),
        jline({"observation": T([7.0]), "reward": float("inf"), "done": False}),
        jline({"op": "close"}),
    ])
    # json.dumps writes Infinity, json.loads reads it back; the boundary
    # validator is what rejects it
    assert out[4]["ok"] is False and "reward" in out[4]["message"]


def test_host_hangup_mid_callback_exits_2():
    rc, out = run_session([
        jline(HOST_INIT),
        jline({"op": "reset", "seed": 0}),
        # no cb reply, stream ends
    ])
    assert rc == 2
    assert out[-1] == {"cb": "reset", "seed": 0}


# --------------------------------------------------------- interactive process


class ServeProc:
    def __init__(self):
        self.proc = subprocess.Popen(
            [sys.executable, "-m", "envwraps.cli", "serve"],
            stdin=subprocess.PIPE, stdout=subprocess.PIPE, stderr=subprocess.PIPE,
            text=True, bufsize=1,
        )

    def send(self, doc):
        self.proc.stdin.write(json.dumps(doc) + "\n")
        self.proc.stdin.flush()

    def recv(self):
        line = self.proc.stdout.readline()
        assert line, "server closed stdout unexpectedly"
        return json.loads(line)

    def ask(self, doc, on_cb=None):
        """Send a request; answer any cb lines via on_cb until the reply lands."""
        self.send(doc)
        while True:
            msg = self.recv()
            if "cb" in msg:
                self.send(on_cb(msg))
                continue
            return msg

    def close(self):
        reply = self.ask({"op": "close"})
        rc = self.proc.wait(timeout=30)
        self.proc.stdin.close()
        return reply, rc


def test_subprocess_env_session():
    s = ServeProc()
    try:
        init = s.ask({"op": "init", "env": {"name": "pixel", "H": 2, "W": 2, "T": 3},
                      "wrappers": [{"name": "flatten"}]})
        assert init["ok"], init
        assert init["observation_space"]["shape"] == [12]
        reset = s.ask({"op": "reset", "seed": 0})
        assert len(reset["observation"]["data"]) == 12
        step = s.ask({"op": "step", "action": 0})
        assert step["ok"] and step["done"] is False
        reply, rc = s.close()
        assert reply == {"ok": True} and rc == 0
    finally:
        s.proc.kill()


def test_subprocess_host_session():
    # a live client-side env: obs counts the steps it has served
    state = {"t": 0}

    def on_cb(msg):
        if msg["cb"] == "reset":
            state["t"] = 0
            return {"observation": T([0.0])}
        assert msg["cb"] == "step"
        state["t"] += 1
        return {
            "observation": T([float(state["t"])]),
            "reward": float(msg["action"]),
            "done": state["t"] >= 3,
            "info": {},
        }

    s = ServeProc()
    try:
        init = s.ask(HOST_INIT)
        assert init["ok"], init
        reset = s.ask({"op": "reset", "seed": 9}, on_cb)
        assert reset["observation"]["data"] == [0.0, 0.0]
        r1 = s.ask({"op": "step", "action": 2}, on_cb)
        assert r1["observation"]["data"] == [0.0, 1.0]
        assert r1["reward"] == 2.0
        r2 = s.ask({"op": "step", "action": 1}, on_cb)
        assert r2["observation"]["data"] == [1.0, 2.0]
        r3 = s.ask({"op": "step", "action": 0}, on_cb)
        assert r3["done"] is True
        reply, rc = s.close()
        assert rc == 0
    finally:
        s.proc.kill()
