// Session state: the checked symptom set and the newest-wins scoring
// loop.  Toggling is idempotent and order-independent — panels always
// reflect the endpoint's answer for the current checked set, never a
// stale one: at most one request is in flight and responses for
// superseded sets are dropped.

import type { ScoreResult } from "./api.js";

export type Scorer = (symptoms: string[]) => Promise<ScoreResult[]>;

export interface Snapshot {
  checked: string[];
  results: ScoreResult[] | null; // null while the first answer is pending
  stale: boolean;                // last request failed; results predate it
}

export class ExplorerState {
  private checked = new Set<string>();
  private results: ScoreResult[] | null = null;
  private stale = false;
  private sequence = 0;

  constructor(
    private readonly scorer: Scorer,
    private readonly onChange: (snapshot: Snapshot) => void,
  ) {}

  snapshot(): Snapshot {
    return {
      checked: [...this.checked].sort(),
      results: this.results,
      stale: this.stale,
    };
  }

  has(symptom: string): boolean {
    return this.checked.has(symptom);
  }

  async toggle(symptom: string, present: boolean): Promise<void> {
    if (present === this.checked.has(symptom)) {
      return; // idempotent: re-checking a checked box changes nothing
    }
    if (present) this.checked.add(symptom);
    else this.checked.delete(symptom);
    await this.rescore();
  }

  async clear(): Promise<void> {
    if (this.checked.size === 0) return;
    this.checked.clear();
    await this.rescore();
  }

  /** Ask the endpoint for the current set; drop superseded answers. */
  async rescore(): Promise<void> {
    const ticket = ++this.sequence;
    const symptoms = [...this.checked].sort();
    try {
      const results = await this.scorer(symptoms);
      if (ticket !== this.sequence) return; // a newer toggle won
      this.results = results;
      this.stale = false;
    } catch {
      if (ticket !== this.sequence) return;
      this.stale = true; // keep showing the previous numbers, marked stale
    }
    this.onChange(this.snapshot());
  }
}
