"""Human-readable interpretation of fitted latent tree models.

Each latent variable is summarized as a pattern: the manifest variables
ranked by mutual information with it, truncated once the ranked prefix
carries enough of the total information (the cumulative coverage cutoff),
and classified as a co-occurrence, mutual-exclusion or singleton pattern
from the shape of the per-state occurrence probabilities.

Mutual information is measured in bits and always under the model
distribution, not the empirical one: patterns describe the model.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .inference import marginal, pairwise_marginal
from .model import LatentTreeModel

CO_OCCURRENCE = "co-occurrence"
MUTUAL_EXCLUSION = "mutual-exclusion"
SINGLETON = "singleton"


def entropy_bits(dist: np.ndarray) -> float:
    p = np.asarray(dist, dtype=float)
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def mutual_information(model: LatentTreeModel, var_a: str, var_b: str) -> float:
    """MI(var_a; var_b) in bits under the model; MI(A; A) is the entropy."""
    joint = pairwise_marginal(model, var_a, var_b)
    pa = joint.sum(axis=1)
    pb = joint.sum(axis=0)
    mask = joint > 0
    outer = np.outer(pa, pb)
    mi = float((joint[mask] * np.log2(joint[mask] / outer[mask])).sum())
    return max(mi, 0.0)


def coverage_prefix(weights, cutoff: float) -> int:
    """Length of the shortest prefix whose weight share reaches the cutoff.

    Prefix coverage is monotone from 0 (empty) to 1 (full list); with all
    weights zero the first element is still retained.
    """
    w = np.asarray(weights, dtype=float)
    total = w.sum()
    if total <= 0:
        return 1 if len(w) else 0
    cum = np.cumsum(w) / total
    return int(np.searchsorted(cum, cutoff - 1e-12) + 1)


@dataclass(frozen=True)
class PatternGroup:
    label: str
    symptoms: tuple[str, ...]


@dataclass(frozen=True)
class Pattern:
    """A latent variable's interpretation over MI-ranked symptoms."""

    latent_id: str
    kind: str
    groups: tuple[PatternGroup, ...]
    state_profile: dict[int, dict[str, float]]   # state -> symptom -> P(s=1|state)
    mi_table: dict[str, float]
    notes: tuple[str, ...] = field(default=())

    @property
    def symptoms(self) -> tuple[str, ...]:
        out = []
        for g in self.groups:
            out.extend(g.symptoms)
        return tuple(out)


def _occurrence_profile(model, latent_id, symptoms):
    """P(s = 1 | latent state) for each symptom, shape (c_latent, n_syms)."""
    marg = marginal(model, latent_id)
    cols = []
    for s in symptoms:
        joint = pairwise_marginal(model, latent_id, s)
        cond = np.divide(joint[:, 1], marg, out=np.zeros_like(marg), where=marg > 0)
        cols.append(cond)
    return np.stack(cols, axis=1)


def _classify(latent_id, ranked, profile):
    """Apply the co-occurrence / mutual-exclusion decision rule.

    Per state, the elevated set holds the symptoms whose occurrence
    probability is strictly highest at that state.  One state elevating
    the whole list is a co-occurrence; several states with disjoint
    elevated sets covering the list form a mutual exclusion; anything
    else falls back to a co-occurrence on the largest elevated set.
    """
    n_states = profile.shape[0]
    elevated = []
    for k in range(n_states):
        others = np.delete(profile, k, axis=0)
        strict = profile[k] > others.max(axis=0) if n_states > 1 else np.ones(
            profile.shape[1], dtype=bool)
        elevated.append([s for s, hit in zip(ranked, strict) if hit])
    full = set(ranked)
    for k, elev in enumerate(elevated):
        if set(elev) == full:
            return CO_OCCURRENCE, (PatternGroup(latent_id, tuple(ranked)),), k, ()
    nonempty = [(k, elev) for k, elev in enumerate(elevated) if elev]
    covered = set().union(*(set(e) for _, e in nonempty)) if nonempty else set()
    if len(nonempty) >= 2 and covered == full:
        groups = tuple(PatternGroup(f"{latent_id}-{i + 1}", tuple(elev))
                       for i, (k, elev) in enumerate(nonempty))
        return MUTUAL_EXCLUSION, groups, None, ()
    if nonempty:
        k, elev = max(nonempty, key=lambda t: (len(t[1]), -t[0]))
        note = ("listed symptoms reduced to the largest single-state elevated set",)
        return CO_OCCURRENCE, (PatternGroup(latent_id, tuple(elev)),), k, note
    note = ("no state strictly elevates any listed symptom",)
    return CO_OCCURRENCE, (PatternGroup(latent_id, tuple(ranked)),), 0, note


def extract_pattern(model: LatentTreeModel, latent_id: str,
                    coverage: float = 0.95) -> Pattern:
    """Interpret one latent variable of a fitted model."""
    if model.var(latent_id).kind != "latent":
        raise ValueError(f"{latent_id!r} is not a latent variable")
    symptoms = sorted(model.manifest_ids)
    mi = {s: mutual_information(model, latent_id, s) for s in symptoms}
    ranked = sorted(symptoms, key=lambda s: (-mi[s], s))
    keep = coverage_prefix([mi[s] for s in ranked], coverage)
    ranked = ranked[:keep]
    profile = _occurrence_profile(model, latent_id, ranked)
    kind, groups, _, notes = _classify(latent_id, ranked, profile)
    listed = [s for g in groups for s in g.symptoms]
    if len(listed) == 1:
        kind = SINGLETON
        groups = (PatternGroup(latent_id, tuple(listed)),)
    cols = {s: j for j, s in enumerate(ranked)}
    state_profile = {k: {s: float(profile[k, cols[s]]) for s in listed}
                     for k in range(profile.shape[0])}
    return Pattern(latent_id, kind, groups, state_profile,
                   {s: mi[s] for s in listed}, notes)


def extract_patterns(model: LatentTreeModel, coverage: float = 0.95) -> list[Pattern]:
    """One pattern per latent variable, ordered by latent id."""
    if not 0 < coverage <= 1:
        raise ValueError("coverage must lie in (0, 1]")
    return [extract_pattern(model, lat, coverage) for lat in sorted(model.latent_ids)]
