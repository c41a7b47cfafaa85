"""Joint clustering of cases over declared symptom groups.

A user-authored syndrome mapping lists symptom groups (with primary or
secondary provenance) supporting one syndrome.  The joint clustering
model puts a dedicated latent class variable Z at the root; multi-symptom
groups are combined into intermediate latent features under Z while
singleton groups attach directly.  A regrouping search can relocate
direct symptoms whose residual dependence is better explained inside a
feature, and the cluster count |Z| is selected by BIC.

Quantification reports model-implied prevalences and per-cluster symptom
occurrence probabilities, with symptoms ranked by their mutual
information with Z and pruned at a cumulative information coverage
cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from .em import EMConfig, em_fit
from .inference import conditional_of, map_state, marginal
from .model import CategoricalDataset, LatentTreeModel, latent_var
from .patterns import coverage_prefix, mutual_information
from .search import _stable_seed, bic

PRIMARY = "primary"
SECONDARY = "secondary"

_ACCEPT_TOL = 1e-9


@dataclass(frozen=True)
class SymptomGroup:
    label: str
    symptoms: tuple[str, ...]
    provenance: str = PRIMARY

    def __post_init__(self):
        if not self.symptoms:
            raise ValueError(f"group {self.label!r} lists no symptoms")
        if self.provenance not in (PRIMARY, SECONDARY):
            raise ValueError(f"group {self.label!r}: provenance must be "
                             f"'primary' or 'secondary'")


@dataclass(frozen=True)
class SyndromeMapping:
    """Which symptom groups support a syndrome, in interpretation order."""

    syndrome_name: str
    groups: tuple[SymptomGroup, ...]
    merge_labels: tuple[str, ...] = ()
    subtype_rule: tuple[str, str] | None = None  # (positive, negative) cluster labels

    def __post_init__(self):
        if not self.groups:
            raise ValueError(f"mapping {self.syndrome_name!r} has no groups")
        seen: set[str] = set()
        for g in self.groups:
            for s in g.symptoms:
                if s in seen:
                    raise ValueError(
                        f"symptom {s!r} appears twice in mapping {self.syndrome_name!r}")
                seen.add(s)
        labels = [g.label for g in self.groups]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate group labels in {self.syndrome_name!r}")

    @property
    def symptoms(self) -> tuple[str, ...]:
        return tuple(s for g in self.groups for s in g.symptoms)

    @property
    def primary_symptoms(self) -> tuple[str, ...]:
        return tuple(s for g in self.groups if g.provenance == PRIMARY
                     for s in g.symptoms)


@dataclass(frozen=True)
class JointClusteringModel:
    """Fitted joint clustering structure plus the group-to-feature wiring."""

    model: LatentTreeModel
    joint_id: str
    feature_map: dict[str, str]    # group label -> feature latent id or "direct"
    mapping: SyndromeMapping

    @property
    def cluster_count(self) -> int:
        return self.model.cardinality(self.joint_id)

    @property
    def direct_symptoms(self) -> tuple[str, ...]:
        joint = self.model
        return tuple(s for s in joint.children(self.joint_id)
                     if joint.var(s).kind == "manifest")

    @property
    def feature_ids(self) -> tuple[str, ...]:
        joint = self.model
        return tuple(f for f in joint.children(self.joint_id)
                     if joint.var(f).kind == "latent")


@dataclass(frozen=True)
class Cluster:
    label: str
    states: tuple[int, ...]
    prevalence: float
    probabilities: dict[str, float]   # every mapped symptom -> P(s=1 | cluster)


@dataclass(frozen=True)
class ClusterQuantification:
    """Prevalence and per-cluster occurrence probabilities for a syndrome."""

    syndrome_name: str
    clusters: tuple[Cluster, ...]
    positive_labels: tuple[str, ...]
    symptom_order: tuple[str, ...]    # MI-descending, coverage-pruned
    mi_table: dict[str, float]        # full, unpruned
    coverage_cutoff: float

    def __post_init__(self):
        total = sum(c.prevalence for c in self.clusters)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"prevalences sum to {total}, expected 1")
        labels = {c.label for c in self.clusters}
        pos = set(self.positive_labels)
        if not pos or not pos < labels:
            raise ValueError("positive clusters must be a non-empty proper subset")

    def cluster(self, label: str) -> Cluster:
        for c in self.clusters:
            if c.label == label:
                return c
        raise KeyError(f"no cluster labeled {label!r}")

    @property
    def positive_states(self) -> tuple[int, ...]:
        out: list[int] = []
        for c in self.clusters:
            if c.label in self.positive_labels:
                out.extend(c.states)
        return tuple(sorted(out))


def _fresh_id(base: str, taken) -> str:
    if base not in taken:
        return base
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def build_joint_model(mapping: SyndromeMapping, dataset: CategoricalDataset,
                      em_config: EMConfig | None = None,
                      max_feature_cardinality: int = 4) -> JointClusteringModel:
    """Build and fit the joint clustering structure for one syndrome.

    Multi-symptom groups are combined into a latent feature under the
    joint variable Z; singleton groups attach directly.  Features start
    binary; their cardinalities are then hill-climbed by BIC (up to
    ``max_feature_cardinality``).  |Z| starts at 2 — use
    ``select_cardinality`` to optimize it.
    """
    em_config = em_config or EMConfig()
    missing = [s for s in mapping.symptoms if s not in dataset.variable_ids]
    if missing:
        raise ValueError(
            f"mapping {mapping.syndrome_name!r} references unknown symptoms: {missing}")
    data = dataset.restrict(sorted(mapping.symptoms))
    taken = set(mapping.symptoms)
    joint_id = _fresh_id("Z", taken)
    taken.add(joint_id)

    variables = [latent_var(joint_id, 2)] + [data.schema[data.column_index(s)]
                                             for s in sorted(mapping.symptoms)]
    edges = []
    feature_map: dict[str, str] = {}
    for i, group in enumerate(mapping.groups):
        if len(group.symptoms) == 1:
            feature_map[group.label] = "direct"
            edges.append((joint_id, group.symptoms[0]))
            continue
        fid = _fresh_id(f"F{i + 1}", taken)
        taken.add(fid)
        variables.append(latent_var(fid, 2))
        feature_map[group.label] = fid
        edges.append((joint_id, fid))
        edges.extend((fid, s) for s in group.symptoms)

    skeleton = LatentTreeModel(variables, edges, joint_id, {})
    fitted = em_fit(skeleton, data,
                    replace(em_config, seed=_stable_seed(em_config.seed, "joint-init"))).model
    joint = JointClusteringModel(fitted, joint_id, feature_map, mapping)
    return _optimize_feature_cardinalities(joint, data, em_config, max_feature_cardinality)


def _with_cardinality(model: LatentTreeModel, vid: str, card: int) -> LatentTreeModel:
    from .model import Variable
    variables = [Variable(v.id, v.name, card, v.kind) if v.id == vid else v
                 for v in model.variables.values()]
    return LatentTreeModel(variables, model.edges, model.root, {})


def _optimize_feature_cardinalities(joint: JointClusteringModel, data,
                                    em_config: EMConfig,
                                    max_card: int) -> JointClusteringModel:
    current = joint.model
    cur_bic = bic(current, data)
    changed = True
    rounds = 0
    while changed and rounds < 20:
        changed = False
        rounds += 1
        for fid in sorted(joint.feature_ids):
            for delta in (+1, -1):
                card = current.cardinality(fid) + delta
                if not 2 <= card <= max_card:
                    continue
                cand = _with_cardinality(current, fid, card)
                cfg = replace(em_config,
                              seed=_stable_seed(em_config.seed, "feature", fid, card))
                res = em_fit(cand, data, cfg)
                cand_bic = bic(res.model, data, res.log_likelihood)
                if cand_bic > cur_bic + _ACCEPT_TOL:
                    current, cur_bic = res.model, cand_bic
                    changed = True
    return replace_model(joint, current)


def replace_model(joint: JointClusteringModel, model: LatentTreeModel) -> JointClusteringModel:
    return JointClusteringModel(model, joint.joint_id, dict(joint.feature_map),
                                joint.mapping)


def _restrict_to_model(joint: JointClusteringModel, dataset: CategoricalDataset):
    want = sorted(joint.model.manifest_ids)
    if list(dataset.variable_ids) == want:
        return dataset
    return dataset.restrict(want)


def regroup_search(joint: JointClusteringModel, dataset: CategoricalDataset,
                   em_config: EMConfig | None = None) -> JointClusteringModel:
    """Hill-climb over relocations of direct-attached symptoms.

    Moves: put a direct symptom under an existing feature, or pair two
    direct symptoms under a new binary latent.  Every candidate is refit
    in full (these models are small, and restricted screening cannot see
    the joint-variable realignment a relocation brings); the best
    BIC-improving move is accepted and the search repeats until nothing
    improves.
    """
    em_config = em_config or EMConfig()
    data = _restrict_to_model(joint, dataset)
    current = joint.model
    feature_map = dict(joint.feature_map)
    cur_bic = bic(current, data)
    step = 0
    while True:
        direct = sorted(s for s in current.children(joint.joint_id)
                        if current.var(s).kind == "manifest")
        features = sorted(f for f in current.children(joint.joint_id)
                          if current.var(f).kind == "latent")
        moves = []
        for s in direct:
            for f in features:
                moves.append(("move", s, f))
        for i in range(len(direct)):
            for j in range(i + 1, len(direct)):
                moves.append(("pair", direct[i], direct[j]))
        if not moves:
            break
        scored = []
        for idx, mv in enumerate(sorted(moves)):
            cand_model, _, new_latent = _apply_move(current, joint.joint_id, mv)
            cfg = replace(em_config,
                          seed=_stable_seed(em_config.seed, "regroup", step, mv))
            res = em_fit(cand_model, data, cfg)
            scored.append((bic(res.model, data, res.log_likelihood), -idx, mv,
                           res.model, new_latent))
        scored.sort(key=lambda t: (t[0], t[1]), reverse=True)
        cand_bic, _, best_move, best_model, new_latent = scored[0]
        if cand_bic <= cur_bic + _ACCEPT_TOL:
            break
        current, cur_bic = best_model, cand_bic
        _update_feature_map(feature_map, joint.mapping, best_move, new_latent)
        step += 1
    return JointClusteringModel(current, joint.joint_id, feature_map, joint.mapping)


def _apply_move(model: LatentTreeModel, joint_id: str, move):
    kind = move[0]
    if kind == "move":
        _, s, f = move
        edges = [e for e in model.edges if set(e) != {joint_id, s}]
        edges.append((f, s))
        new = LatentTreeModel(model.variables.values(), edges, model.root,
                              {vid: t for vid, t in model.tables.items() if vid != s})
        return new, (s,), None
    _, s, t = move
    taken = set(model.variables)
    wid = _fresh_id("W", taken)
    variables = list(model.variables.values()) + [latent_var(wid, 2)]
    edges = [e for e in model.edges if set(e) not in ({joint_id, s}, {joint_id, t})]
    edges += [(joint_id, wid), (wid, s), (wid, t)]
    new = LatentTreeModel(variables, edges, model.root,
                          {vid: tt for vid, tt in model.tables.items()
                           if vid not in (s, t)})
    return new, (wid, s, t), wid


def _update_feature_map(feature_map, mapping: SyndromeMapping, move, new_latent):
    def label_of(symptom):
        for g in mapping.groups:
            if symptom in g.symptoms and len(g.symptoms) == 1:
                return g.label
        return None

    if move[0] == "move":
        lbl = label_of(move[1])
        if lbl is not None:
            feature_map[lbl] = move[2]
    else:
        for s in (move[1], move[2]):
            lbl = label_of(s)
            if lbl is not None:
                feature_map[lbl] = new_latent


def select_cardinality(joint: JointClusteringModel, dataset: CategoricalDataset,
                       em_config: EMConfig | None = None,
                       lo: int = 2, hi: int = 5) -> JointClusteringModel:
    """Refit for each |Z| in [lo, hi]; keep the best BIC, ties to smaller.

    The incoming fit stands as the incumbent for its own cardinality, so
    the result never scores below the input.
    """
    em_config = em_config or EMConfig()
    data = _restrict_to_model(joint, dataset)
    best = (bic(joint.model, data), joint.model)
    for card in range(lo, hi + 1):
        if card == joint.cluster_count:
            continue
        cand = _with_cardinality(joint.model, joint.joint_id, card)
        cfg = replace(em_config, seed=_stable_seed(em_config.seed, "zcard", card))
        res = em_fit(cand, data, cfg)
        score = bic(res.model, data, res.log_likelihood)
        if score > best[0] + _ACCEPT_TOL:
            best = (score, res.model)
    return replace_model(joint, best[1])


_ROMAN = ["I", "II", "III", "IV", "V", "VI", "VII", "VIII"]


def quantify(joint: JointClusteringModel, dataset: CategoricalDataset | None = None,
             coverage: float = 0.95) -> ClusterQuantification:
    """Model-implied prevalences and per-cluster symptom probabilities.

    The positive cluster(s) are those with elevated occurrence of the
    mapping's primary symptoms: the state with the lowest primary-symptom
    mean is the negative cluster, every other state is positive.  The
    dataset argument is accepted for interface symmetry; all reported
    quantities come from the fitted model.
    """
    if not 0 < coverage <= 1:
        raise ValueError("coverage must lie in (0, 1]")
    model, zid = joint.model, joint.joint_id
    name = joint.mapping.syndrome_name
    symptoms = sorted(joint.mapping.symptoms)
    pi = marginal(model, zid)
    prob = {s: conditional_of(model, s, given=zid)[:, 1] for s in symptoms}
    mi = {s: mutual_information(model, zid, s) for s in symptoms}
    ranked = sorted(symptoms, key=lambda s: (-mi[s], s))
    keep = coverage_prefix([mi[s] for s in ranked], coverage)
    order = tuple(ranked[:keep])

    primary = [s for s in joint.mapping.primary_symptoms if s in prob] or symptoms
    means = np.array([np.mean([prob[s][k] for s in primary])
                      for k in range(len(pi))])
    negative_state = int(np.argmin(means))
    positive_states = [k for k in range(len(pi)) if k != negative_state]
    positive_states.sort(key=lambda k: (-pi[k], k))

    clusters = []
    if len(positive_states) == 1:
        pos_labels = [name]
    else:
        pos_labels = [f"{name} {_ROMAN[i]}" for i in range(len(positive_states))]
    for lbl, k in zip(pos_labels, positive_states):
        clusters.append(Cluster(lbl, (k,), float(pi[k]),
                                {s: float(prob[s][k]) for s in symptoms}))
    clusters.append(Cluster(f"non-{name}", (negative_state,), float(pi[negative_state]),
                            {s: float(prob[s][negative_state]) for s in symptoms}))
    return ClusterQuantification(name, tuple(clusters), tuple(pos_labels),
                                 order, mi, coverage)


def merge_clusters(q: ClusterQuantification, labels: Sequence[str],
                   new_label: str | None = None) -> ClusterQuantification:
    """Combine clusters; prevalences add, probabilities average by weight."""
    labels = list(labels)
    if len(labels) < 2:
        raise ValueError("need at least two cluster labels to merge")
    known = {c.label for c in q.clusters}
    unknown = [l for l in labels if l not in known]
    if unknown:
        raise ValueError(f"unknown cluster labels: {unknown}")
    if set(labels) == known:
        raise ValueError("cannot merge all clusters")
    parts = [q.cluster(l) for l in labels]
    weight = sum(c.prevalence for c in parts)
    merged_probs = {s: sum(c.prevalence * c.probabilities[s] for c in parts) / weight
                    for s in parts[0].probabilities}
    if new_label is None:
        new_label = (q.syndrome_name if set(labels) == set(q.positive_labels)
                     else labels[0])
    states = tuple(sorted(st for c in parts for st in c.states))
    merged = Cluster(new_label, states, weight, merged_probs)
    out, placed = [], False
    for c in q.clusters:
        if c.label in labels:
            if not placed:
                out.append(merged)
                placed = True
            continue
        out.append(c)
    was_positive = any(l in q.positive_labels for l in labels)
    pos = [c.label for c in out
           if c.label in q.positive_labels or (c.label == new_label and was_positive)]
    return ClusterQuantification(q.syndrome_name, tuple(out), tuple(pos),
                                 q.symptom_order, dict(q.mi_table), q.coverage_cutoff)


def assign_cluster(joint: JointClusteringModel, case: Mapping[str, int]) -> int:
    """MAP state of the joint variable Z for one complete case."""
    return map_state(joint.model, joint.joint_id, case)
