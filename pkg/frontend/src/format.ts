// Verbatim number rendering.  Scores arrive as JSON numbers; displaying
// String(n) would turn 9.0 into "9", silently diverging from the wire
// text.  Integral values therefore render with one decimal, everything
// else with the shortest round-trip digits — which reproduces the JSON
// float serialization of the scoring server byte for byte over the
// score/threshold value range.

export function formatScore(n: number): string {
  if (Number.isInteger(n) && Number.isFinite(n)) {
    return n.toFixed(1);
  }
  return String(n);
}

export function formatAccuracy(a: number | null): string {
  return a === null ? "n/a" : String(a);
}
