"""Read co-occurrence and mutual-exclusion patterns off a fitted model.

Each latent variable is summarized by its most informative symptoms
(mutual-information ranked, pruned at 95% cumulative coverage) and
classified by which latent states elevate which symptoms.
"""

import numpy as np

from ltmkit import LatentTreeModel, latent_var, manifest_var
from ltmkit.patterns import extract_patterns, mutual_information

# one latent whose two states elevate disjoint symptom sets (mutual
# exclusion), and one producing joint elevation (co-occurrence)
model = LatentTreeModel(
    variables=[latent_var("thirst kind", 3), latent_var("fatigue"),
               manifest_var("thirst desire hot drinks"),
               manifest_var("thirst desire cold drinks"),
               manifest_var("lack of strength"),
               manifest_var("mental fatigue")],
    edges=[("thirst kind", "thirst desire hot drinks"),
           ("thirst kind", "thirst desire cold drinks"),
           ("thirst kind", "fatigue"),
           ("fatigue", "lack of strength"),
           ("fatigue", "mental fatigue")],
    root="thirst kind",
    tables={
        "thirst kind": np.array([0.25, 0.2, 0.55]),
        "thirst desire hot drinks": np.array([[0.2, 0.8], [0.97, 0.03], [0.95, 0.05]]),
        "thirst desire cold drinks": np.array([[0.96, 0.04], [0.15, 0.85], [0.94, 0.06]]),
        "fatigue": np.array([[0.5, 0.5], [0.45, 0.55], [0.7, 0.3]]),
        "lack of strength": np.array([[0.8, 0.2], [0.1, 0.9]]),
        "mental fatigue": np.array([[0.85, 0.15], [0.2, 0.8]]),
    },
)

for pattern in extract_patterns(model, coverage=0.95):
    print(f"{pattern.latent_id}: {pattern.kind}")
    for group in pattern.groups:
        print(f"  [{group.label}] " + ", ".join(group.symptoms))
    ranked = ", ".join(f"{s} ({pattern.mi_table[s]:.3f} bit)"
                       for s in pattern.symptoms)
    print("  by information:", ranked)

print("\ncross-check: MI(fatigue; lack of strength) =",
      round(mutual_information(model, "fatigue", "lack of strength"), 4), "bits")
