// Pure view builders: rule documents + score responses in, display data
// out.  Everything the panels show is computed here from endpoint
// responses verbatim, so the renderer has no arithmetic to get wrong.

import type { RuleDoc, ScoreResult } from "./api.js";
import { formatAccuracy, formatScore } from "./format.js";

export interface ItemView {
  symptom: string;
  scoreText: string;
  checked: boolean;
  contributing: boolean;
}

export interface PanelView {
  syndrome: string;
  positiveLabel: string;
  thresholdText: string;
  accuracyText: string;
  totalScoreText: string;   // "—" until the first response arrives
  decision: "positive" | "negative" | "pending";
  barFraction: number;      // totalScore / threshold, clamped to [0, 1]
  items: ItemView[];
}

export function masterChecklist(rules: RuleDoc[]): string[] {
  const all = rules.flatMap((r) => r.items.map((i) => i.symptom));
  return [...new Set(all)];
}

export function panelView(
  rule: RuleDoc,
  result: ScoreResult | null,
  checked: Set<string>,
): PanelView {
  const contributions = result?.contributions ?? {};
  return {
    syndrome: rule.syndrome,
    positiveLabel: rule.positiveLabel,
    thresholdText: formatScore(rule.threshold),
    accuracyText: formatAccuracy(rule.accuracy),
    totalScoreText: result === null ? "—" : formatScore(result.totalScore),
    decision: result === null ? "pending" : result.decision,
    barFraction:
      result === null || rule.threshold <= 0
        ? 0
        : Math.max(0, Math.min(1, result.totalScore / rule.threshold)),
    items: rule.items.map((item) => ({
      symptom: item.symptom,
      scoreText: formatScore(item.score),
      checked: checked.has(item.symptom),
      contributing: item.symptom in contributions,
    })),
  };
}

export function panelViews(
  rules: RuleDoc[],
  results: ScoreResult[] | null,
  checked: Set<string>,
): PanelView[] {
  const byLabel = new Map<string, ScoreResult>();
  for (const r of results ?? []) byLabel.set(r.positiveLabel, r);
  return rules.map((rule) =>
    panelView(rule, byLabel.get(rule.positiveLabel) ?? null, checked),
  );
}
