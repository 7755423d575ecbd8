/** Element dtypes a wire tensor may carry; must match the server's table. */
export const DTYPES = ["u8", "i32", "f32", "f64"] as const;

export type DType = (typeof DTYPES)[number];

export const BYTE_WIDTH: Record<DType, number> = {
  u8: 1,
  i32: 4,
  f32: 4,
  f64: 8,
} as const;

export function isDType(x: unknown): x is DType {
  return typeof x === "string" && (DTYPES as readonly string[]).includes(x);
}

export function isFloatDType(dtype: DType): boolean {
  return dtype === "f32" || dtype === "f64";
}

// largest finite f32, for the saturating f64 -> f32 cast
const F32_MAX = 3.4028234663852886e38;

/**
 * Saturating cast of one f64 value into `dtype`, mirroring the server's
 * casting rules: float -> f32 clamps finite values into the f32 range
 * (infinities pass through), anything -> int truncates toward zero then
 * clamps, and NaN casts to integer 0.
 */
export function castValue(v: number, dtype: DType): number {
  switch (dtype) {
    case "f64":
      return v;
    case "f32":
      if (Number.isFinite(v)) v = Math.min(Math.max(v, -F32_MAX), F32_MAX);
      return Math.fround(v);
    case "i32":
      return castInt(v, -2147483648, 2147483647);
    case "u8":
      return castInt(v, 0, 255);
  }
}

function castInt(v: number, lo: number, hi: number): number {
  if (Number.isNaN(v)) return 0;
  return Math.min(Math.max(Math.trunc(v), lo), hi);
}
