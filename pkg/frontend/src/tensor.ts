import { BYTE_WIDTH, DType, isDType } from "./dtypes";

/**
 * A tensor as it crosses the wire: flat row-major data plus shape and dtype.
 * This is the exact JSON shape the server sends and accepts, so values can be
 * passed through without re-encoding.
 */
export interface Tensor {
  dtype: DType;
  shape: number[];
  data: number[];
}

export function numel(shape: readonly number[]): number {
  let n = 1;
  for (const d of shape) n *= d;
  return n;
}

export function tensor(dtype: DType, shape: number[], data: number[]): Tensor {
  if (data.length !== numel(shape)) {
    throw new RangeError(
      `data length ${data.length} does not match shape [${shape.join(", ")}]`,
    );
  }
  return { dtype, shape: [...shape], data: [...data] };
}

export function zeros(dtype: DType, shape: readonly number[]): Tensor {
  return { dtype, shape: [...shape], data: new Array(numel(shape)).fill(0) };
}

/** Loose structural check — enough to tell a tensor from a plain int action. */
export function isTensor(x: unknown): x is Tensor {
  if (x === null || typeof x !== "object") return false;
  const t = x as Record<string, unknown>;
  return isDType(t.dtype) && Array.isArray(t.shape) && Array.isArray(t.data);
}

/**
 * Row-major little-endian byte image of a tensor — the encoding the
 * trajectory checksum is defined over.
 */
export function tensorBytes(t: Tensor): Uint8Array {
  const width = BYTE_WIDTH[t.dtype];
  const out = new Uint8Array(t.data.length * width);
  const view = new DataView(out.buffer);
  switch (t.dtype) {
    case "u8":
      for (let i = 0; i < t.data.length; i++) view.setUint8(i, t.data[i]);
      break;
    case "i32":
      for (let i = 0; i < t.data.length; i++) view.setInt32(i * 4, t.data[i], true);
      break;
    case "f32":
      for (let i = 0; i < t.data.length; i++) view.setFloat32(i * 4, t.data[i], true);
      break;
    case "f64":
      for (let i = 0; i < t.data.length; i++) view.setFloat64(i * 8, t.data[i], true);
      break;
  }
  return out;
}
