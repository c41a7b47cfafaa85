"""The whole pipeline from a config file, exactly as the CLI runs it.

Writes a project directory (synthetic survey CSV, mapping, config), runs
learn -> interpret -> per-syndrome clustering -> rules, and lists the
artifact bundle.  Running it twice with the same seed produces
byte-identical artifacts.

Afterwards, serve the reference rules for the browser UI with:

    ltmkit serve --rules-dir src/ltmkit/data/rules --bind 127.0.0.1:8703
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from ltmkit import LatentTreeModel, latent_var, manifest_var
from ltmkit.io import write_model
from ltmkit.pipeline import load_config, run_pipeline, simulate

root = Path(tempfile.mkdtemp(prefix="ltmkit-demo-"))
print("project directory:", root)

groups = {
    "energy": {"lack of strength": (0.85, 0.15), "mental fatigue": (0.80, 0.10),
               "loose stool": (0.70, 0.20)},
    "chest": {"chest oppression": (0.80, 0.10), "palpitation": (0.75, 0.15),
              "short of breath": (0.85, 0.20)},
}
variables = [latent_var("energy"), latent_var("chest")]
edges = [("energy", "chest")]
tables = {"energy": np.array([0.45, 0.55]),
          "chest": np.array([[0.85, 0.15], [0.2, 0.8]])}
for lat, syms in groups.items():
    for s, (hi, lo) in syms.items():
        variables.append(manifest_var(s))
        edges.append((lat, s))
        tables[s] = np.array([[1 - lo, lo], [1 - hi, hi]])
write_model(LatentTreeModel(variables, edges, "energy", tables),
            root / "generator.json")
simulate(root / "generator.json", 800, seed=2, out_path=root / "survey.csv")

(root / "mapping.json").write_text(json.dumps({"syndromes": [
    {"name": "Strength Depletion", "groups": [
        {"label": "fatigue", "symptoms": ["lack of strength", "mental fatigue"],
         "provenance": "primary"},
        {"label": "stool", "symptoms": ["loose stool"], "provenance": "secondary"}]},
    {"name": "Chest Burden", "groups": [
        {"label": "chest", "symptoms": ["chest oppression", "palpitation"],
         "provenance": "primary"},
        {"label": "breath", "symptoms": ["short of breath"],
         "provenance": "primary"}]},
]}, indent=2), encoding="utf-8")

(root / "config.json").write_text(json.dumps({
    "dataset": "survey.csv",
    "mapping": "mapping.json",
    "outputDir": "out",
    "seed": 23,
    "coverage": 0.95,
    "em": {"restarts": 8, "maxIterations": 200},
    "search": {"maxPasses": 10},
}, indent=2), encoding="utf-8")

bundle = run_pipeline(load_config(root / "config.json"))
print(f"\nlearned model: {len(bundle.model.latent_ids)} latent variables")
for art in bundle.syndromes:
    rule = art.rules[0]
    print(f"{art.name}: {len(art.quantification.clusters)} clusters; rule with "
          f"{len(rule.items)} items, threshold {rule.threshold:.2f}, "
          f"accuracy {rule.accuracy:.3f}")
print("\nartifacts:")
for path in bundle.paths:
    print(" ", path.relative_to(root))
