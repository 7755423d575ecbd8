import { describe, expect, it } from "vitest";

import { castValue } from "../src/dtypes";
import { Pcg32 } from "../src/rng";
import { BoxSpace, sampleSpace, zeroAction } from "../src/spaces";
import { Tensor } from "../src/tensor";

const box = (low: number, high: number, shape: number[], dtype: BoxSpace["dtype"]): BoxSpace => {
  const n = shape.reduce((a, b) => a * b, 1);
  return {
    kind: "box",
    dtype,
    shape,
    low: new Array(n).fill(low),
    high: new Array(n).fill(high),
  };
};

describe("sampleSpace", () => {
  // All expectation values below were drawn from the server's sampler with
  // the same seeds; equality must be exact, not approximate.
  it("discrete draws are nextU32 % n", () => {
    const rng = new Pcg32(7);
    const draws = Array.from({ length: 6 }, () => sampleSpace({ kind: "discrete", n: 4 }, rng));
    expect(draws).toEqual([1, 2, 3, 3, 0, 0]);
  });

  it("box f32 draws map the uniform into [lo, hi] then round to f32", () => {
    const sample = sampleSpace(box(-1, 1, [3], "f32"), new Pcg32(7)) as Tensor;
    expect(sample.dtype).toBe("f32");
    expect(sample.shape).toEqual([3]);
    expect(sample.data).toEqual([0.8923704028129578, -0.002081247977912426, 0.27598509192466736]);
  });

  it("box i32 draws use nextInt per element", () => {
    const sample = sampleSpace(box(0, 9, [4], "i32"), new Pcg32(3)) as Tensor;
    expect(sample.data).toEqual([9, 0, 4, 8]);
  });

  it("infinite float bounds clamp to the +/-1e6 sampling window", () => {
    const sample = sampleSpace(box(-Infinity, Infinity, [2], "f64"), new Pcg32(5)) as Tensor;
    expect(sample.data).toEqual([-879946.272354573, 963551.8975555897]);
  });
});

describe("zeroAction", () => {
  it("discrete zero action is the integer 0", () => {
    expect(zeroAction({ kind: "discrete", n: 3 })).toBe(0);
  });

  it("box zero action is an all-zero tensor of the space dtype", () => {
    const a = zeroAction(box(-1, 1, [2, 2], "f32")) as Tensor;
    expect(a).toEqual({ dtype: "f32", shape: [2, 2], data: [0, 0, 0, 0] });
  });
});

describe("castValue", () => {
  it("f32 saturates huge finite values and keeps infinities", () => {
    const F32_MAX = 3.4028234663852886e38;
    expect(castValue(1e39, "f32")).toBe(F32_MAX);
    expect(castValue(-1e39, "f32")).toBe(-F32_MAX);
    expect(castValue(Infinity, "f32")).toBe(Infinity);
    expect(castValue(1.1, "f32")).toBe(Math.fround(1.1));
  });

  it("integer targets truncate toward zero then clamp", () => {
    expect(castValue(3.7, "i32")).toBe(3);
    expect(castValue(-2.9, "i32")).toBe(-2);
    expect(castValue(4e9, "i32")).toBe(2147483647);
    expect(castValue(299.7, "u8")).toBe(255);
    expect(castValue(-1, "u8")).toBe(0);
  });

  it("NaN casts to integer 0", () => {
    expect(castValue(NaN, "u8")).toBe(0);
    expect(castValue(NaN, "i32")).toBe(0);
  });
});
