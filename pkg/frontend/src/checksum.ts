/**
 * 64-bit FNV-1a, the trajectory checksum primitive.  Folding the same bytes
 * in the same order as the native benchmark yields the same state, which is
 * how a foreign client proves it received every observation byte unchanged.
 */

export const FNV_OFFSET = 0xcbf29ce484222325n;
export const FNV_PRIME = 0x100000001b3n;

const MASK64 = (1n << 64n) - 1n;

// one BigInt per byte value, allocated once
const BYTE = Array.from({ length: 256 }, (_, i) => BigInt(i));

export function fnv1a64(data: Uint8Array, h: bigint = FNV_OFFSET): bigint {
  for (let i = 0; i < data.length; i++) {
    h = ((h ^ BYTE[data[i]]) * FNV_PRIME) & MASK64;
  }
  return h;
}

/** Render a checksum state the way reports spell it: 0x + 16 hex digits. */
export function formatChecksum(h: bigint): string {
  return "0x" + h.toString(16).padStart(16, "0");
}
