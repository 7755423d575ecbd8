import { castValue, DType, isFloatDType } from "./dtypes";
import { Pcg32 } from "./rng";
import { numel, Tensor, zeros } from "./tensor";

/** Box space as it appears on the wire: inclusive flat row-major bounds. */
export interface BoxSpace {
  kind: "box";
  dtype: DType;
  shape: number[];
  low: number[];
  high: number[];
}

export interface DiscreteSpace {
  kind: "discrete";
  n: number;
}

export type Space = BoxSpace | DiscreteSpace;

/** Discrete actions travel as plain integers, box actions as tensors. */
export type Action = number | Tensor;

// widest finite window used when drawing from (half-)unbounded boxes
const SAMPLE_CLAMP = 1e6;

export function zeroAction(space: Space): Action {
  if (space.kind === "discrete") return 0;
  return zeros(space.dtype, space.shape);
}

/**
 * Deterministic draw matching the server's policy arithmetic draw-for-draw:
 *
 * - discrete: `nextU32() % n`
 * - box float: one `nextUniform()` per element in row-major order, mapped to
 *   `lo + u * (hi - lo)` in f64 then cast to the space dtype; infinite bounds
 *   are clamped to +/-1e6 first
 * - box int: one `nextInt(lo, hi)` per element in row-major order
 */
export function sampleSpace(space: Space, rng: Pcg32): Action {
  if (space.kind === "discrete") {
    return rng.nextU32() % space.n;
  }
  const n = numel(space.shape);
  const data = new Array<number>(n);
  if (isFloatDType(space.dtype)) {
    for (let i = 0; i < n; i++) {
      const lo = Math.max(space.low[i], -SAMPLE_CLAMP);
      const hi = Math.min(space.high[i], SAMPLE_CLAMP);
      data[i] = castValue(lo + rng.nextUniform() * (hi - lo), space.dtype);
    }
  } else {
    for (let i = 0; i < n; i++) {
      const lo = Math.max(space.low[i], -SAMPLE_CLAMP);
      const hi = Math.min(space.high[i], SAMPLE_CLAMP);
      data[i] = rng.nextInt(Math.trunc(lo), Math.trunc(hi));
    }
  }
  return { dtype: space.dtype, shape: [...space.shape], data };
}
