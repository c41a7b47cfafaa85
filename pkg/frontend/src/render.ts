// HTML string rendering of the checklist and syndrome panels.  Kept free
// of document/global access so it is testable without a browser; main.ts
// owns the live DOM.

import { CATEGORY_ORDER, groupByCategory } from "./categories.js";
import type { PanelView } from "./views.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderChecklist(symptoms: string[], checked: Set<string>): string {
  const grouped = groupByCategory(symptoms);
  const sections: string[] = [];
  for (const category of CATEGORY_ORDER) {
    const members = grouped.get(category);
    if (!members) continue;
    const boxes = members
      .map((s) => {
        const esc = escapeHtml(s);
        const on = checked.has(s) ? " checked" : "";
        return (
          `<label class="symptom"><input type="checkbox" data-symptom="${esc}"${on}>` +
          `<span>${esc}</span></label>`
        );
      })
      .join("\n");
    sections.push(
      `<section class="category"><h3>${category}</h3>\n${boxes}\n</section>`,
    );
  }
  return sections.join("\n");
}

export function renderPanel(view: PanelView, stale: boolean): string {
  const badgeClass =
    view.decision === "pending" ? "pending" : view.decision;
  const rows = view.items
    .map((item) => {
      const cls = item.contributing ? "item contributing" : "item";
      return (
        `<li class="${cls}"><span class="name">${escapeHtml(item.symptom)}</span>` +
        `<span class="score">${item.scoreText}</span></li>`
      );
    })
    .join("\n");
  const width = (view.barFraction * 100).toFixed(1);
  const staleTag = stale ? `<span class="stale">stale</span>` : "";
  return `<article class="panel" data-label="${escapeHtml(view.positiveLabel)}">
  <header>
    <h2>${escapeHtml(view.positiveLabel)}</h2>
    <span class="badge ${badgeClass}">${view.decision}</span>${staleTag}
  </header>
  <div class="meter"><div class="bar ${badgeClass}" style="width: ${width}%"></div></div>
  <p class="numbers"><span class="total">${view.totalScoreText}</span>
     / threshold <span class="threshold">${view.thresholdText}</span>
     &middot; accuracy ${view.accuracyText}</p>
  <ul class="items">
${rows}
  </ul>
</article>`;
}

export function renderPanels(views: PanelView[], stale: boolean): string {
  if (views.length === 0) {
    return `<p class="empty">No rules loaded — the endpoint returned an empty rule set.</p>`;
  }
  return views.map((v) => renderPanel(v, stale)).join("\n");
}

export function renderError(message: string): string {
  return (
    `<div class="error"><p>${escapeHtml(message)}</p>` +
    `<button id="retry">Retry</button></div>`
  );
}
