import numpy as np
import pytest

from ltmkit.model import LatentTreeModel, latent_var, manifest_var


def make_naive_bayes(prior, present_probs, root_id="z", symptom_ids=None):
    """Binary-symptom naive Bayes: P(s=1 | root state) given per symptom.

    prior: sequence over root states.  present_probs: mapping symptom id ->
    sequence of P(s=1 | state), or a 2-D array (states x symptoms).
    """
    prior = np.asarray(prior, dtype=float)
    if isinstance(present_probs, dict):
        ids = list(present_probs)
        mat = np.array([present_probs[s] for s in ids], dtype=float).T
    else:
        mat = np.asarray(present_probs, dtype=float)
        ids = symptom_ids or [f"s{j}" for j in range(mat.shape[1])]
    variables = [latent_var(root_id, len(prior))] + [manifest_var(s) for s in ids]
    edges = [(root_id, s) for s in ids]
    tables = {root_id: prior}
    for j, s in enumerate(ids):
        p = mat[:, j]
        tables[s] = np.stack([1.0 - p, p], axis=1)
    return LatentTreeModel(variables, edges, root_id, tables)


def random_tree_model(rng, n_vars=8, binary=True, max_latents=3):
    """Random valid latent tree model with random Dirichlet(1) tables."""
    n_lat = int(rng.integers(1, min(max_latents, max(1, n_vars // 2)) + 1))
    n_man = n_vars - n_lat
    lat_ids = [f"h{i}" for i in range(n_lat)]
    man_ids = [f"s{i}" for i in range(n_man)]
    cards = {}
    for v in lat_ids + man_ids:
        cards[v] = 2 if binary else int(rng.integers(2, 4))
    edges = []
    for i in range(1, n_lat):
        edges.append((lat_ids[i], lat_ids[int(rng.integers(0, i))]))
    # one manifest per latent keeps every latent identifiable
    for i, l in enumerate(lat_ids):
        edges.append((l, man_ids[i]))
    for m in man_ids[n_lat:]:
        edges.append((lat_ids[int(rng.integers(0, n_lat))], m))
    variables = ([latent_var(v, cards[v]) for v in lat_ids]
                 + [manifest_var(v, cards[v]) for v in man_ids])
    skeleton = LatentTreeModel(variables, edges, lat_ids[0], {})
    tables = {}
    for vid in skeleton.topo_order():
        shape = skeleton.expected_table_shape(vid)
        if len(shape) == 1:
            tables[vid] = rng.dirichlet(np.ones(shape[0]))
        else:
            tables[vid] = rng.dirichlet(np.ones(shape[1]), size=shape[0])
    return LatentTreeModel(variables, edges, lat_ids[0], tables)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
