import { describe, expect, it } from "vitest";

import { fnv1a64, FNV_OFFSET, formatChecksum } from "../src/checksum";
import { tensorBytes } from "../src/tensor";

const ascii = (s: string) => new Uint8Array([...s].map((c) => c.charCodeAt(0)));

describe("fnv1a64", () => {
  it("empty input is the offset basis", () => {
    expect(fnv1a64(new Uint8Array(0))).toBe(0xcbf29ce484222325n);
  });

  it("matches the published single-byte and multi-byte vectors", () => {
    expect(fnv1a64(ascii("a"))).toBe(0xaf63dc4c8601ec8cn);
    expect(fnv1a64(ascii("foobar"))).toBe(0x85944171f73967e8n);
  });

  it("folding in chunks equals folding at once", () => {
    const whole = fnv1a64(ascii("foobar"));
    let h = FNV_OFFSET;
    h = fnv1a64(ascii("foo"), h);
    h = fnv1a64(ascii("bar"), h);
    expect(h).toBe(whole);
  });

  it("formatChecksum pads to 16 hex digits", () => {
    expect(formatChecksum(0xcbf29ce484222325n)).toBe("0xcbf29ce484222325");
    expect(formatChecksum(0x1n)).toBe("0x0000000000000001");
  });
});

describe("tensorBytes", () => {
  // hex oracles produced by the native byte encoder
  it("u8 data maps straight through", () => {
    const bytes = tensorBytes({ dtype: "u8", shape: [2, 3], data: [0, 1, 2, 3, 4, 5] });
    expect(Buffer.from(bytes).toString("hex")).toBe("000102030405");
    expect(fnv1a64(bytes)).toBe(0xa54ac5bf0ea60dden);
  });

  it("i32 is little-endian two's complement", () => {
    const bytes = tensorBytes({ dtype: "i32", shape: [2, 2], data: [1, 2, 300, -4] });
    expect(Buffer.from(bytes).toString("hex")).toBe("01000000020000002c010000fcffffff");
  });

  it("f32 elements take 4 bytes little-endian", () => {
    const bytes = tensorBytes({ dtype: "f32", shape: [2], data: [1.5, -2.25] });
    expect(Buffer.from(bytes).toString("hex")).toBe("0000c03f000010c0");
  });

  it("f64 keeps full precision, including the sign of -0.0", () => {
    const bytes = tensorBytes({ dtype: "f64", shape: [2], data: [0.1, -0.0] });
    expect(Buffer.from(bytes).toString("hex")).toBe("9a9999999999b93f0000000000000080");
  });
});
