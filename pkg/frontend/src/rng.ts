/**
 * PCG32 (XSH-RR output over a 64-bit LCG), bit-identical to the server's
 * generator.  The benchmark's random policy draws from this stream, so an
 * independent implementation here lets checksum parity cover the full
 * seed -> actions -> trajectory pipeline rather than just transport.
 */

const MASK64 = (1n << 64n) - 1n;
const MASK32 = 0xffffffffn;
const MULT = 6364136223846793005n;

export class Pcg32 {
  private state: bigint;
  private readonly inc: bigint;

  constructor(seed: number | bigint, stream: number | bigint = 0) {
    const s = BigInt(seed);
    if (s < 0n || s >= 1n << 64n) {
      throw new RangeError(`seed must be a u64, got ${seed}`);
    }
    this.inc = ((BigInt(stream) << 1n) | 1n) & MASK64;
    this.state = 0n;
    this.nextU32();
    this.state = (this.state + s) & MASK64;
    this.nextU32();
  }

  nextU32(): number {
    const old = this.state;
    this.state = (old * MULT + this.inc) & MASK64;
    const xorshifted = Number((((old >> 18n) ^ old) >> 27n) & MASK32);
    const rot = Number(old >> 59n);
    return ((xorshifted >>> rot) | (xorshifted << ((32 - rot) & 31))) >>> 0;
  }

  /** Uniform double in [0, 1): nextU32() / 2**32 (exact). */
  nextUniform(): number {
    return this.nextU32() * 2 ** -32;
  }

  /** Integer in [lo, hi] via modulo reduction (documented bias accepted). */
  nextInt(lo: number, hi: number): number {
    if (hi < lo) throw new RangeError(`empty range [${lo}, ${hi}]`);
    return lo + (this.nextU32() % (hi - lo + 1));
  }
}
