import { describe, expect, it } from "vitest";

import type { ScoreResult } from "../src/api.js";
import { ExplorerState, type Snapshot } from "../src/state.js";

function resultFor(symptoms: string[]): ScoreResult[] {
  return [
    {
      syndrome: "X",
      positiveLabel: "X",
      totalScore: symptoms.length, // deterministic stand-in for the endpoint
      threshold: 2,
      decision: symptoms.length >= 2 ? "positive" : "negative",
      contributions: Object.fromEntries(symptoms.map((s) => [s, 1])),
    },
  ];
}

function collector(): { snapshots: Snapshot[]; onChange: (s: Snapshot) => void } {
  const snapshots: Snapshot[] = [];
  return { snapshots, onChange: (s) => snapshots.push(s) };
}

describe("ExplorerState", () => {
  it("reflects the endpoint answer for the current checked set", async () => {
    const { snapshots, onChange } = collector();
    const state = new ExplorerState(async (s) => resultFor(s), onChange);
    await state.toggle("a", true);
    await state.toggle("b", true);
    const last = snapshots.at(-1)!;
    expect(last.checked).toEqual(["a", "b"]);
    expect(last.results![0].totalScore).toBe(2);
    expect(last.results![0].decision).toBe("positive");
  });

  it("is idempotent: re-toggling to the same value sends nothing", async () => {
    let calls = 0;
    const state = new ExplorerState(
      async (s) => {
        calls += 1;
        return resultFor(s);
      },
      () => {},
    );
    await state.toggle("a", true);
    await state.toggle("a", true);
    await state.toggle("a", true);
    expect(calls).toBe(1);
  });

  it("is order-independent: any path to the same set shows the same panels", async () => {
    async function runSequence(seq: Array<[string, boolean]>): Promise<Snapshot> {
      const { snapshots, onChange } = collector();
      const state = new ExplorerState(async (s) => resultFor(s), onChange);
      for (const [symptom, present] of seq) await state.toggle(symptom, present);
      return snapshots.at(-1)!;
    }
    const a = await runSequence([["a", true], ["b", true]]);
    const b = await runSequence([["b", true], ["a", true]]);
    const c = await runSequence([
      ["c", true],
      ["a", true],
      ["c", false],
      ["b", true],
    ]);
    expect(a.checked).toEqual(b.checked);
    expect(a.results).toEqual(b.results);
    expect(a.results).toEqual(c.results);
  });

  it("drops superseded responses: the newest toggle wins", async () => {
    const { snapshots, onChange } = collector();
    const resolvers: Array<(r: ScoreResult[]) => void> = [];
    const pending: string[][] = [];
    const state = new ExplorerState(
      (s) =>
        new Promise((resolve) => {
          pending.push(s);
          resolvers.push(resolve);
        }),
      onChange,
    );
    const first = state.toggle("a", true);
    const second = state.toggle("b", true);
    // answer the requests out of order: newest (a, b) first, stale (a) last
    resolvers[1](resultFor(pending[1]));
    await second;
    resolvers[0](resultFor(pending[0]));
    await first;
    const last = snapshots.at(-1)!;
    expect(last.results![0].totalScore).toBe(2); // the {a, b} answer, not {a}
    expect(snapshots).toHaveLength(1); // the stale answer never rendered
  });

  it("flags a failed request as stale and keeps previous numbers", async () => {
    const { snapshots, onChange } = collector();
    let fail = false;
    const state = new ExplorerState(async (s) => {
      if (fail) throw new Error("connection refused");
      return resultFor(s);
    }, onChange);
    await state.toggle("a", true);
    fail = true;
    await state.toggle("b", true);
    const last = snapshots.at(-1)!;
    expect(last.stale).toBe(true);
    expect(last.results![0].totalScore).toBe(1); // previous answer retained
    expect(last.checked).toEqual(["a", "b"]);
  });
});
