"""Learn latent structure from data with the BIC-guided operator search.

Generates survey-like data from a hidden two-group model, starts the
search from a single latent class, and watches it rediscover the groups.
"""

import numpy as np

from ltmkit import LatentTreeModel, forward_sample, latent_var, manifest_var
from ltmkit.em import EMConfig, em_fit
from ltmkit.search import SearchConfig, bic, east_search, initial_lca_model, sibling_partition

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
truth = LatentTreeModel(variables, edges, "energy", tables)

data = forward_sample(truth, 2000, seed=3)
config = SearchConfig(seed=17)

start = em_fit(initial_lca_model(data), data, config.phase_em)
print(f"one-class start: BIC {bic(start.model, data, start.log_likelihood):.1f}")

learned = east_search(data, config)
print(f"learned structure: {len(learned.latent_ids)} latent variables, "
      f"BIC {bic(learned, data):.1f}")
for group in sorted(sibling_partition(learned), key=sorted):
    print("  group:", sorted(group))
