// Bootstrap: load rules, build the master checklist, and live-update the
// syndrome panels through the scoring endpoint as symptoms are toggled.

import { EndpointError, fetchRules, fetchScores, type RuleDoc } from "./api.js";
import { renderChecklist, renderError, renderPanels } from "./render.js";
import { ExplorerState } from "./state.js";
import { masterChecklist, panelViews } from "./views.js";

const DEFAULT_ENDPOINT = "http://127.0.0.1:8703";

function endpointFromLocation(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("endpoint") ?? DEFAULT_ENDPOINT;
}

async function boot(): Promise<void> {
  const checklistHost = document.getElementById("checklist")!;
  const panelsHost = document.getElementById("panels")!;
  const statusHost = document.getElementById("status")!;
  const endpoint = endpointFromLocation();
  statusHost.textContent = `rules from ${endpoint}`;

  let rules: RuleDoc[];
  try {
    rules = await fetchRules(endpoint);
  } catch (e) {
    panelsHost.innerHTML = renderError(
      e instanceof EndpointError ? e.message : String(e),
    );
    document.getElementById("retry")?.addEventListener("click", () => boot());
    return;
  }

  const symptoms = masterChecklist(rules);
  const state = new ExplorerState(
    (present) => fetchScores(endpoint, present),
    (snapshot) => {
      const checked = new Set(snapshot.checked);
      panelsHost.innerHTML = renderPanels(
        panelViews(rules, snapshot.results, checked),
        snapshot.stale,
      );
    },
  );

  checklistHost.innerHTML = renderChecklist(symptoms, new Set());
  checklistHost.addEventListener("change", (event) => {
    const box = event.target as HTMLInputElement;
    const symptom = box.dataset.symptom;
    if (symptom !== undefined) void state.toggle(symptom, box.checked);
  });
  document.getElementById("clear")?.addEventListener("click", () => {
    checklistHost
      .querySelectorAll<HTMLInputElement>("input[type=checkbox]")
      .forEach((box) => (box.checked = false));
    void state.clear();
  });

  await state.rescore(); // initial all-absent scoring
}

window.addEventListener("DOMContentLoaded", () => void boot());
