"""Observation wrappers.

All kernels operate on Box observations.  Image kernels pin their sampling
conventions exactly (documented per kernel) because downstream trajectory
checksums require bit-identical results everywhere.
"""

from collections import deque

import numpy as np

from ..dtypes import DTYPES, cast_array, is_float, to_numpy
from ..env import Env, ParallelEnv, StepResult
from ..errors import InvalidParam, PreconditionFailed, ShapeMismatch
from ..rng import Pcg32
from ..spaces import BoxSpace
from .base import KernelEnv, ObsKernel, apply_kernel

__all__ = [
    "color_reduction",
    "resize",
    "dtype_cast",
    "flatten",
    "reshape",
    "normalize_obs",
    "frame_stack",
    "frame_skip",
    "delay_observations",
]

# BT.601 luma weights; round-half-up keeps grey inputs (R=G=B=v) at exactly v
_LUMA_R, _LUMA_G, _LUMA_B = 0.299, 0.587, 0.114


def _require_box(space, what: str) -> BoxSpace:
    if not isinstance(space, BoxSpace):
        raise PreconditionFailed(f"{what} needs a Box observation space, got {space!r}")
    return space


def _round_half_up_u8(x: np.ndarray) -> np.ndarray:
    return np.clip(np.floor(x + 0.5), 0, 255).astype(np.uint8)


class ColorReductionKernel(ObsKernel):
    def __init__(self, mode: str = "full"):
        if mode not in ("full", "R", "G", "B"):
            raise InvalidParam(f"color_reduction mode must be full/R/G/B, got {mode!r}")
        self.mode = mode

    def bind(self, space):
        box = _require_box(space, "color_reduction")
        if box.dtype != "u8" or len(box.shape) != 3 or box.shape[2] != 3:
            raise PreconditionFailed(
                f"color_reduction needs a (H, W, 3) u8 image, got {box.shape} {box.dtype}"
            )
        h, w, _ = box.shape
        return BoxSpace(0, 255, shape=(h, w), dtype="u8")

    def apply(self, obs):
        if self.mode != "full":
            return np.ascontiguousarray(obs[:, :, "RGB".index(self.mode)])
        img = obs.astype(np.float64)
        grey = img[:, :, 0] * _LUMA_R + img[:, :, 1] * _LUMA_G + img[:, :, 2] * _LUMA_B
        return _round_half_up_u8(grey)


def color_reduction(env, mode: str = "full"):
    """Collapse an RGB image to one channel.

    mode "full" is the weighted luma 0.299 R + 0.587 G + 0.114 B rounded
    half-up and saturated to u8; "R"/"G"/"B" select a single channel.
    """
    return apply_kernel(env, lambda i: ColorReductionKernel(mode), "obs")


def _nearest_indices(dst: int, src: int) -> np.ndarray:
    # source index for output pixel d: floor((d + 0.5) * src / dst)
    idx = np.floor((np.arange(dst) + 0.5) * src / dst).astype(np.int64)
    return np.clip(idx, 0, src - 1)


def _bilinear_axis(dst: int, src: int):
    # pixel-center sample coordinate for output pixel d, clamped to the edges
    coord = np.clip((np.arange(dst) + 0.5) * src / dst - 0.5, 0.0, src - 1.0)
    i0 = np.floor(coord).astype(np.int64)
    i1 = np.minimum(i0 + 1, src - 1)
    return i0, i1, coord - i0


class ResizeKernel(ObsKernel):
    def __init__(self, out_h: int, out_w: int, interp: str = "nearest"):
        if not (isinstance(out_h, int) and isinstance(out_w, int)) or out_h < 1 or out_w < 1:
            raise InvalidParam(f"resize dims must be ints >= 1, got ({out_h!r}, {out_w!r})")
        if interp not in ("nearest", "bilinear"):
            raise InvalidParam(f"resize interp must be nearest/bilinear, got {interp!r}")
        self.out_h, self.out_w, self.interp = out_h, out_w, interp

    def bind(self, space):
        box = _require_box(space, "resize")
        if box.dtype not in ("u8", "f32") or len(box.shape) not in (2, 3):
            raise PreconditionFailed(
                f"resize needs a (H, W) or (H, W, C) u8/f32 image, got {box.shape} {box.dtype}"
            )
        self._rank = len(box.shape)
        self._dtype = box.dtype
        # bounds go through the identical kernel, so containment is preserved
        return BoxSpace(self._resample(box.low), self._resample(box.high),
                        dtype=box.dtype)

    def apply(self, obs):
        return self._resample(obs)

    def _resample(self, img):
        src_h, src_w = img.shape[0], img.shape[1]
        if self.interp == "nearest":
            ys = _nearest_indices(self.out_h, src_h)
            xs = _nearest_indices(self.out_w, src_w)
            return np.ascontiguousarray(img[ys[:, None], xs[None, :]])
        flat = img if self._rank == 3 else img[:, :, None]
        y0, y1, wy = _bilinear_axis(self.out_h, src_h)
        x0, x1, wx = _bilinear_axis(self.out_w, src_w)
        f = flat.astype(np.float64)
        wy = wy[:, None, None]
        wx = wx[None, :, None]
        top = f[y0][:, x0] * (1.0 - wx) + f[y0][:, x1] * wx
        bot = f[y1][:, x0] * (1.0 - wx) + f[y1][:, x1] * wx
        out = top * (1.0 - wy) + bot * wy
        if self._rank == 2:
            out = out[:, :, 0]
        if self._dtype == "u8":
            return _round_half_up_u8(out)
        return out.astype(np.float32)


def resize(env, out_h: int, out_w: int, interp: str = "nearest"):
    """Resample an image to (out_h, out_w).

    nearest: source pixel floor((d + 0.5) * src / dst) per axis.
    bilinear: pixel-center sampling with edge clamping; u8 output rounds
    half-up and saturates.
    """
    return apply_kernel(env, lambda i: ResizeKernel(out_h, out_w, interp), "obs")


class DtypeCastKernel(ObsKernel):
    def __init__(self, target: str):
        if target not in DTYPES:
            raise InvalidParam(f"dtype target must be one of {DTYPES}, got {target!r}")
        self.target = target

    def bind(self, space):
        box = _require_box(space, "dtype")
        return BoxSpace(cast_array(box.low, self.target),
                        cast_array(box.high, self.target), dtype=self.target)

    def apply(self, obs):
        return cast_array(obs, self.target)


def dtype_cast(env, target: str):
    """Cast observations elementwise with saturation; no value rescaling."""
    return apply_kernel(env, lambda i: DtypeCastKernel(target), "obs")


class FlattenKernel(ObsKernel):
    def bind(self, space):
        box = _require_box(space, "flatten")
        return BoxSpace(box.low.ravel(), box.high.ravel(), dtype=box.dtype)

    def apply(self, obs):
        return obs.reshape(-1)


def flatten(env):
    """Row-major flatten to rank 1."""
    return apply_kernel(env, lambda i: FlattenKernel(), "obs")


class ReshapeKernel(ObsKernel):
    def __init__(self, new_shape):
        shape = tuple(new_shape)
        if not shape or any(not isinstance(d, int) or d < 1 for d in shape):
            raise InvalidParam(f"reshape needs positive int dims, got {new_shape!r}")
        self.new_shape = shape

    def bind(self, space):
        box = _require_box(space, "reshape")
        if int(np.prod(box.shape)) != int(np.prod(self.new_shape)):
            raise ShapeMismatch(
                f"cannot reshape {box.shape} ({int(np.prod(box.shape))} elements) "
                f"to {self.new_shape} ({int(np.prod(self.new_shape))} elements)"
            )
        return BoxSpace(box.low.reshape(self.new_shape),
                        box.high.reshape(self.new_shape), dtype=box.dtype)

    def apply(self, obs):
        return obs.reshape(self.new_shape)


def reshape(env, new_shape):
    """Row-major reshape; element count must match."""
    return apply_kernel(env, lambda i: ReshapeKernel(new_shape), "obs")


class NormalizeObsKernel(ObsKernel):
    def __init__(self, out_min: float = 0.0, out_max: float = 1.0):
        if not (out_min < out_max):
            raise InvalidParam(f"normalize_obs needs out_min < out_max, got [{out_min}, {out_max}]")
        self.out_min = float(out_min)
        self.out_max = float(out_max)

    def bind(self, space):
        box = _require_box(space, "normalize_obs")
        lo = box.low.astype(np.float64)
        hi = box.high.astype(np.float64)
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise PreconditionFailed("normalize_obs needs finite bounds")
        if not np.all(lo < hi):
            raise PreconditionFailed("normalize_obs needs low < high elementwise")
        self._lo, self._span = lo, hi - lo
        return BoxSpace(self.out_min, self.out_max, shape=box.shape, dtype="f32")

    def apply(self, obs):
        # lerp form: r=0 -> out_min and r=1 -> out_max exactly; the clip only
        # removes float dust so emissions always sit inside the declared box
        r = (obs.astype(np.float64) - self._lo) / self._span
        out = self.out_min * (1.0 - r) + self.out_max * r
        return np.clip(out, self.out_min, self.out_max).astype(np.float32)


def normalize_obs(env, out_min: float = 0.0, out_max: float = 1.0):
    """Affinely map [low, high] to [out_min, out_max]; output is f32."""
    return apply_kernel(env, lambda i: NormalizeObsKernel(out_min, out_max), "obs")


class FrameStackKernel(ObsKernel):
    """Keep the last N observations and emit them as one tensor.

    Layout by base rank: (d,) -> (d*N,) concatenated oldest-first;
    (H, W) -> (H, W, N) with the newest frame in the last slice;
    (H, W, C) -> (H, W, C*N) concatenated oldest-first along channels.
    """

    def __init__(self, n: int, fill_mode: str = "zero"):
        if not isinstance(n, int) or n < 1:
            raise InvalidParam(f"frame_stack N must be an int >= 1, got {n!r}")
        if fill_mode not in ("zero", "repeat_first"):
            raise InvalidParam(f"frame_stack fill_mode must be zero/repeat_first, got {fill_mode!r}")
        self.n = n
        self.fill_mode = fill_mode
        self._frames: deque = deque(maxlen=n)

    def bind(self, space):
        box = _require_box(space, "frame_stack")
        if len(box.shape) not in (1, 2, 3):
            raise PreconditionFailed(f"frame_stack needs rank 1-3, got shape {box.shape}")
        self._shape = box.shape
        self._np_dtype = to_numpy(box.dtype)
        lo, hi = self._assemble_bounds(box.low), self._assemble_bounds(box.high)
        if self.fill_mode == "zero":
            # zero-filled warm-up frames must stay inside the declared box
            lo = np.minimum(lo, 0)
            hi = np.maximum(hi, 0)
        return BoxSpace(lo, hi, dtype=box.dtype)

    def _assemble_bounds(self, arr):
        return self._assemble([arr] * self.n)

    def _assemble(self, frames):
        rank = len(self._shape)
        if rank == 1:
            return np.concatenate(frames)
        if rank == 2:
            return np.ascontiguousarray(np.stack(frames, axis=-1))
        return np.concatenate(frames, axis=-1)

    def on_reset(self, obs):
        self._frames.clear()
        if self.fill_mode == "zero":
            for _ in range(self.n - 1):
                self._frames.append(np.zeros(self._shape, dtype=self._np_dtype))
        else:
            for _ in range(self.n - 1):
                self._frames.append(obs)
        self._frames.append(obs)
        return self._assemble(list(self._frames))

    def apply(self, obs):
        self._frames.append(obs)
        return self._assemble(list(self._frames))


def frame_stack(env, n: int, fill_mode: str = "zero"):
    """Stack the last ``n`` observations; reset pre-fills per ``fill_mode``."""
    return apply_kernel(env, lambda i: FrameStackKernel(n, fill_mode), "obs")


class DelayKernel(ObsKernel):
    def __init__(self, delay: int):
        if not isinstance(delay, int) or delay < 0:
            raise InvalidParam(f"delay must be an int >= 0, got {delay!r}")
        self.delay = delay
        self._queue: deque = deque()

    def bind(self, space):
        box = _require_box(space, "delay")
        self._shape = box.shape
        self._np_dtype = to_numpy(box.dtype)
        if self.delay == 0:
            return box
        # warm-up emissions are zero tensors; widen bounds to keep them legal
        return BoxSpace(np.minimum(box.low, 0), np.maximum(box.high, 0), dtype=box.dtype)

    def _zeros(self):
        return np.zeros(self._shape, dtype=self._np_dtype)

    def on_reset(self, obs):
        self._queue.clear()
        self._queue.append(obs)
        if self.delay == 0:
            return self._queue.popleft()
        return self._zeros()

    def apply(self, obs):
        self._queue.append(obs)
        if len(self._queue) == self.delay + 1:
            return self._queue.popleft()
        return self._zeros()


def delay_observations(env, delay: int):
    """Emit the base observation from ``delay`` steps ago (zeros until then).

    Rewards, done flags, and info are not delayed.
    """
    return apply_kernel(env, lambda i: DelayKernel(delay), "obs")


def _check_skip(skip) -> tuple:
    if isinstance(skip, int) and not isinstance(skip, bool):
        if skip < 1:
            raise InvalidParam(f"frame_skip skip must be >= 1, got {skip}")
        return (skip, skip)
    if isinstance(skip, (tuple, list)) and len(skip) == 2:
        lo, hi = skip
        if (isinstance(lo, int) and isinstance(hi, int)
                and not isinstance(lo, bool) and not isinstance(hi, bool)
                and 1 <= lo <= hi):
            return (lo, hi)
    raise InvalidParam(f"frame_skip skip must be an int >= 1 or (lo, hi) with 1 <= lo <= hi, got {skip!r}")


class FrameSkipEnv(Env):
    """Repeat each action for k base steps; rewards sum, the last step's
    observation/done/info are returned, and the loop stops early on done."""

    def __init__(self, env: Env, skip, seed: int = 0):
        self.env = env
        self._lo, self._hi = _check_skip(skip)
        self._rng = Pcg32(seed) if self._lo != self._hi else None
        self.observation_space = env.observation_space
        self.action_space = env.action_space

    def _draw(self) -> int:
        if self._rng is None:
            return self._lo
        return self._rng.next_int(self._lo, self._hi)

    def reset(self, seed: int | None = None):
        return self.env.reset(seed)

    def step(self, action) -> StepResult:
        k = self._draw()
        total = 0.0
        res = None
        for _ in range(k):
            res = self.env.step(action)
            total += res.reward
            if res.done:
                break
        return StepResult(res.observation, total, res.done, res.info)


class ParallelFrameSkipEnv(ParallelEnv):
    """Joint lift of frame skip: one shared skip count per multi-agent step.

    The inner loop stops as soon as any agent reports done, so every returned
    result comes from the same number of base steps.
    """

    def __init__(self, env: ParallelEnv, skip, seed: int = 0):
        self.env = env
        self._lo, self._hi = _check_skip(skip)
        self._rng = Pcg32(seed) if self._lo != self._hi else None

    @property
    def agents(self):
        return self.env.agents

    def observation_space(self, agent):
        return self.env.observation_space(agent)

    def action_space(self, agent):
        return self.env.action_space(agent)

    def reset(self, seed: int | None = None):
        return self.env.reset(seed)

    def step(self, actions: dict) -> dict:
        k = self._lo if self._rng is None else self._rng.next_int(self._lo, self._hi)
        totals: dict = {}
        last: dict = {}
        for _ in range(k):
            results = self.env.step({a: actions[a] for a in self.env.agents})
            for agent, res in results.items():
                totals[agent] = totals.get(agent, 0.0) + res.reward
                last[agent] = res
            if any(res.done for res in results.values()):
                break
        return {
            agent: StepResult(res.observation, totals[agent], res.done, res.info)
            for agent, res in last.items()
        }


def frame_skip(env, skip, seed: int = 0):
    """Repeat actions for ``skip`` base steps (or a per-step draw from
    ``(lo, hi)`` inclusive, using a PCG32 stream seeded with ``seed``)."""
    if isinstance(env, ParallelEnv):
        return ParallelFrameSkipEnv(env, skip, seed)
    return FrameSkipEnv(env, skip, seed)
