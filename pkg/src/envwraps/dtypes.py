"""The four element dtypes tensors may carry, and the casting rules between them.

Dtypes are spelled as short strings ("u8", "i32", "f32", "f64") so they survive
JSON round trips unchanged.  Casts are value-preserving where the value is
representable and saturate otherwise; float -> int truncates toward zero before
saturating.  NaN casts to integer 0.
"""

import numpy as np

from .errors import InvalidParam

__all__ = ["DTYPES", "to_numpy", "from_numpy", "cast_array", "is_float", "byte_order_code"]

DTYPES = ("u8", "i32", "f32", "f64")

_NP = {
    "u8": np.dtype(np.uint8),
    "i32": np.dtype(np.int32),
    "f32": np.dtype(np.float32),
    "f64": np.dtype(np.float64),
}
_FROM_NP = {v: k for k, v in _NP.items()}

# explicit little-endian codes for checksum byte streams
_LE = {"u8": "|u1", "i32": "<i4", "f32": "<f4", "f64": "<f8"}

_F32_MAX = float(np.finfo(np.float32).max)


def to_numpy(dtype: str) -> np.dtype:
    try:
        return _NP[dtype]
    except KeyError:
        raise InvalidParam(f"unknown dtype {dtype!r}; expected one of {DTYPES}") from None


def from_numpy(np_dtype) -> str:
    try:
        return _FROM_NP[np.dtype(np_dtype)]
    except KeyError:
        raise InvalidParam(f"unsupported numpy dtype {np_dtype!r}") from None


def is_float(dtype: str) -> bool:
    return dtype in ("f32", "f64")


def byte_order_code(dtype: str) -> str:
    """Numpy dtype string with the little-endian element encoding pinned."""
    return _LE[dtype]


def cast_array(arr: np.ndarray, target: str) -> np.ndarray:
    """Cast ``arr`` to ``target`` with saturation instead of wraparound.

    - int/float -> wider float: exact (or nearest representable).
    - float -> narrower float: finite values clamp to the target's finite range;
      infinities pass through.
    - anything -> int: truncate toward zero, then clamp to the integer range.
      NaN becomes 0.
    """
    np_t = to_numpy(target)
    if is_float(target):
        if target == "f32" and arr.dtype == np.float64:
            out = np.where(
                np.isfinite(arr), np.clip(arr, -_F32_MAX, _F32_MAX), arr
            )
            return out.astype(np_t)
        return arr.astype(np_t)
    info = np.iinfo(np_t)
    v = arr.astype(np.float64)
    v = np.trunc(np.nan_to_num(v, nan=0.0))
    v = np.clip(v, info.min, info.max)
    return v.astype(np_t)
