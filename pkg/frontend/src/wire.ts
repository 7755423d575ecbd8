/**
 * JSON-line codec for the server pipe.
 *
 * The server's serializer emits bare `Infinity` / `-Infinity` / `NaN` tokens
 * for non-finite floats (clip-to-bounds wrappers advertise infinite action
 * bounds, for example), which strict JSON.parse rejects — and its parser
 * accepts the same tokens coming back.  Both directions here handle that
 * dialect; everything else is plain JSON.
 */

export function parseWireLine(line: string): unknown {
  try {
    return JSON.parse(line);
  } catch (err) {
    return parseNonFinite(line, err);
  }
}

// Only reached when strict parsing failed, i.e. a bare token sits somewhere
// outside a string.  The value-position prefixes below can in principle match
// inside a string on such a line, but non-finite numbers only ever appear in
// space bounds, nowhere near free-form text.
function parseNonFinite(line: string, originalError: unknown): unknown {
  const patched = line
    .replace(/(^|[:,[\s])-Infinity/g, '$1{"":"-inf"}')
    .replace(/(^|[:,[\s])Infinity/g, '$1{"":"inf"}')
    .replace(/(^|[:,[\s])NaN/g, '$1{"":"nan"}');
  let doc: unknown;
  try {
    doc = JSON.parse(patched, (_key, value) => {
      if (value !== null && typeof value === "object" && "" in value) {
        const tag = (value as Record<string, unknown>)[""];
        return tag === "inf" ? Infinity : tag === "-inf" ? -Infinity : NaN;
      }
      return value;
    });
  } catch {
    throw originalError;
  }
  return doc;
}

export function stringifyWireLine(doc: unknown): string {
  let sawToken = false;
  const s = JSON.stringify(doc, (_key, value) => {
    if (typeof value === "number") {
      if (!Number.isFinite(value)) {
        sawToken = true;
        if (Number.isNaN(value)) return "nan";
        return value > 0 ? "inf" : "-inf";
      }
      // JSON.stringify spells -0 as "0"; the server spells it "-0.0", and
      // bit-exact pass-through needs the sign to survive.
      if (Object.is(value, -0)) {
        sawToken = true;
        return "-0";
      }
    }
    return value;
  });
  if (!sawToken) return s;
  return s
    .replace(/"-inf"/g, "-Infinity")
    .replace(/"inf"/g, "Infinity")
    .replace(/"nan"/g, "NaN")
    .replace(/"-0"/g, "-0.0");
}
