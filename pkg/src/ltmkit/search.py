"""BIC-guided structure search over latent tree models.

Hill-climbing with five operators — state introduction/deletion (SI/SD),
node introduction/deletion (NI/ND) and node relocation (NR) — grouped
into expansion, adjustment and simplification phases that repeat until no
phase improves the BIC score.  Candidates are screened cheaply with
restricted EM; only the screening winner of a phase step is refit in
full.  Expansion candidates are ranked by improvement per added
parameter, which keeps the search from buying states it cannot pay for.

Everything is deterministic given the config seed: candidate enumeration
is canonical, and every randomized fit derives its own seed from the
candidate identity, so screening order (serial or parallel) cannot change
the outcome.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

import numpy as np

from .em import EMConfig, em_fit, local_em
from .inference import log_likelihood, reroot
from .model import (
    CategoricalDataset,
    LatentTreeModel,
    Variable,
    latent_var,
    validate_model,
)

_ACCEPT_TOL = 1e-9


def _default_phase_em() -> EMConfig:
    # fewer restarts than a standalone fit: the search refits after every
    # accepted move, so the full 16-restart budget would be wasted here
    return EMConfig(max_iterations=200, tolerance=1e-4, restarts=4)


@dataclass(frozen=True)
class SearchConfig:
    max_latent_cardinality: int = 8
    screening_em_iterations: int = 20
    phase_em: EMConfig = field(default_factory=_default_phase_em)
    seed: int = 0
    max_passes: int = 50

    def __post_init__(self):
        if self.max_latent_cardinality < 2:
            raise ValueError("max_latent_cardinality must be >= 2")


def bic(model: LatentTreeModel, dataset: CategoricalDataset,
        loglik: float | None = None) -> float:
    """logL - d/2 * ln N with d the rooted free-parameter count."""
    if loglik is None:
        loglik = log_likelihood(model, dataset)
    n = max(dataset.total_n, 1)
    return loglik - model.free_parameters() / 2.0 * np.log(n)


def _stable_seed(*parts) -> int:
    digest = hashlib.blake2s(repr(parts).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def _structure_ok(model: LatentTreeModel) -> bool:
    return not [v for v in validate_model(model)
                if "table" not in v and "column" not in v]


def _fresh_latent_id(model: LatentTreeModel) -> str:
    k = 0
    while f"h{k}" in model.variables:
        k += 1
    return f"h{k}"


@dataclass(frozen=True)
class Candidate:
    """One structural edit: a model with stale tables dropped, plus the
    focus set whose tables must be re-estimated."""

    kind: str              # NI | SI | NR | SD | ND
    key: tuple
    model: LatentTreeModel
    focus: tuple[str, ...]

    @property
    def order_key(self):
        return (self.kind, self.key)


def _keep_tables(model: LatentTreeModel, drop: set[str]) -> dict:
    return {vid: t for vid, t in model.tables.items() if vid not in drop}


def _state_change(model: LatentTreeModel, lat: str, delta: int,
                  max_card: int) -> Candidate | None:
    var = model.var(lat)
    new_card = var.cardinality + delta
    if new_card < 2:
        return None
    if delta > 0:
        cap = min(max_card,
                  int(np.prod([model.cardinality(v) for v in model.neighbors(lat)])))
        if new_card > cap:
            return None
    variables = [v if v.id != lat else Variable(lat, v.name, new_card, v.kind)
                 for v in model.variables.values()]
    focus = (lat,) + model.children(lat)
    new = LatentTreeModel(variables, model.edges, model.root,
                          _keep_tables(model, set(focus)))
    return Candidate("SI" if delta > 0 else "SD", (lat,), new, focus)


def _node_introduction(model: LatentTreeModel, lat: str, c1: str, c2: str) -> Candidate | None:
    w = _fresh_latent_id(model)
    variables = list(model.variables.values()) + [latent_var(w, 2)]
    edges = [e for e in model.edges
             if set(e) not in ({lat, c1}, {lat, c2})]
    edges += [(lat, w), (w, c1), (w, c2)]
    focus = (w, c1, c2)
    new = LatentTreeModel(variables, edges, model.root,
                          _keep_tables(model, {c1, c2}))
    if not _structure_ok(new):
        return None
    return Candidate("NI", (lat, c1, c2), new, focus)


def _node_deletion(model: LatentTreeModel, lat: str, target: str) -> Candidate | None:
    """Merge latent `lat` into its latent neighbor `target`."""
    if model.root == lat:
        model = reroot(model, target)
    moved = tuple(v for v in model.neighbors(lat) if v != target)
    variables = [v for v in model.variables.values() if v.id != lat]
    edges = [e for e in model.edges if lat not in e]
    edges += [(target, v) for v in moved]
    focus = list(moved)
    if model.parent(target) == lat:
        focus.append(target)  # target inherits lat's parent; its table is stale
    new = LatentTreeModel(variables, edges, model.root,
                          {vid: t for vid, t in model.tables.items()
                           if vid != lat and vid not in focus})
    if not _structure_ok(new):
        return None
    return Candidate("ND", (lat, target), new, tuple(focus))


def _node_relocation(model: LatentTreeModel, lat: str, child: str, target: str) -> Candidate | None:
    """Reattach a child of `lat` under another latent `target`."""
    # target must stay outside the moved subtree or the tree disconnects
    stack, subtree = [child], {child}
    while stack:
        u = stack.pop()
        for v in model.children(u):
            subtree.add(v)
            stack.append(v)
    if target in subtree:
        return None
    edges = [e for e in model.edges if set(e) != {lat, child}]
    edges.append((target, child))
    new = LatentTreeModel(model.variables.values(), edges, model.root,
                          _keep_tables(model, {child}))
    if not _structure_ok(new):
        return None
    return Candidate("NR", (lat, child, target), new, (child,))


def candidate_operators(model: LatentTreeModel,
                        max_latent_cardinality: int = 8) -> list[Candidate]:
    """All valid single-operator edits of the model, canonically ordered."""
    out: list[Candidate] = []
    latents = sorted(model.latent_ids)
    for lat in latents:
        for delta in (+1, -1):
            cand = _state_change(model, lat, delta, max_latent_cardinality)
            if cand is not None:
                out.append(cand)
        kids = sorted(model.children(lat))
        for i in range(len(kids)):
            for j in range(i + 1, len(kids)):
                cand = _node_introduction(model, lat, kids[i], kids[j])
                if cand is not None:
                    out.append(cand)
        for nb in model.neighbors(lat):
            if model.var(nb).kind == "latent":
                cand = _node_deletion(model, lat, nb)
                if cand is not None:
                    out.append(cand)
        for child in model.children(lat):
            for target in latents:
                if target == lat:
                    continue
                cand = _node_relocation(model, lat, child, target)
                if cand is not None:
                    out.append(cand)
    out.sort(key=lambda c: c.order_key)
    return out


_PHASES = {
    "expand": ("NI", "SI"),
    "adjust": ("NR",),
    "simplify": ("ND", "SD"),
}


def initial_lca_model(dataset: CategoricalDataset, latent_id: str | None = None) -> LatentTreeModel:
    """Single binary latent connected to every manifest variable, unfitted."""
    ids = [v.id for v in dataset.schema]
    lid = latent_id or "h0"
    k = 0
    while lid in ids:
        lid = f"h{k}"
        k += 1
    variables = [latent_var(lid, 2)] + list(dataset.schema)
    edges = [(lid, v) for v in ids]
    return LatentTreeModel(variables, edges, lid, {})


def initial_fit(dataset: CategoricalDataset, config: SearchConfig):
    """The search's starting point: the EM-fitted one-latent model."""
    cfg = replace(config.phase_em, seed=_stable_seed(config.seed, "refit", "init"))
    return em_fit(initial_lca_model(dataset), dataset, cfg)


def east_search(dataset: CategoricalDataset, config: SearchConfig) -> LatentTreeModel:
    """Search for the best-BIC latent tree structure on the dataset.

    Starts from a fitted one-latent model and alternates expansion (NI,
    SI), adjustment (NR) and simplification (ND, SD) phases; stops when a
    full pass improves nothing or ``max_passes`` is reached.  The result
    never scores below the starting model.
    """
    if len(dataset.schema) < 2:
        raise ValueError("east_search needs at least 2 manifest variables")
    if dataset.total_n < 1:
        raise ValueError("east_search needs a non-empty dataset")

    def refit(model, context):
        cfg = replace(config.phase_em, seed=_stable_seed(config.seed, "refit", context))
        return em_fit(model, dataset, cfg)

    current = initial_fit(dataset, config).model
    cur_bic = bic(current, dataset)

    for pass_i in range(config.max_passes):
        improved = False
        for phase, kinds in _PHASES.items():
            step = 0
            while True:
                cands = [c for c in candidate_operators(current, config.max_latent_cardinality)
                         if c.kind in kinds]
                if not cands:
                    break
                context = (pass_i, phase, step)
                scored = []
                cur_d = current.free_parameters()
                for idx, cand in enumerate(cands):
                    seed = _stable_seed(config.seed, "screen", context, cand.kind, cand.key)
                    cfg = EMConfig(max_iterations=config.screening_em_iterations,
                                   tolerance=config.phase_em.tolerance,
                                   restarts=1, seed=seed,
                                   smoothing=config.phase_em.smoothing)
                    res = local_em(cand.model, dataset, cand.focus, cfg)
                    gain = bic(res.model, dataset, res.log_likelihood) - cur_bic
                    if phase == "expand":
                        delta_d = cand.model.free_parameters() - cur_d
                        metric = gain / delta_d if delta_d > 0 else gain
                    else:
                        metric = gain
                    scored.append((metric, idx, cand))
                # winner: best metric, ties to the canonical earliest candidate
                scored.sort(key=lambda t: (-t[0], t[1]))
                top = scored[0][2]
                res = refit(top.model, (context, top.kind, top.key))
                top_bic = bic(res.model, dataset, res.log_likelihood)
                if top_bic > cur_bic + _ACCEPT_TOL:
                    current, cur_bic = res.model, top_bic
                    improved = True
                    step += 1
                else:
                    break
        if not improved:
            break
    return current


def sibling_partition(model: LatentTreeModel) -> set[frozenset]:
    """Manifest variables grouped by the latent they attach to."""
    groups: dict[str, set[str]] = {}
    for m in model.manifest_ids:
        nb = model.neighbors(m)[0]
        groups.setdefault(nb, set()).add(m)
    return {frozenset(g) for g in groups.values()}
