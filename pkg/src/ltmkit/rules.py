"""Score-based classification rules derived from cluster quantifications.

For a two-cluster quantification with positive prevalence pi and
occurrence probabilities p_s (positive) and q_s (negative), the rule
assigns each symptom the weight-of-evidence score

    w_s = log2[ p_s (1 - q_s) / (q_s (1 - p_s)) ]

and the threshold

    T = log2((1 - pi) / pi) + sum_s log2((1 - q_s) / (1 - p_s))

over the symptoms kept in the rule.  A case is positive when the sum of
the scores of its present symptoms reaches T.  With conditionally
independent symptoms this is exactly the MAP decision boundary of the
underlying two-cluster model, which is what rule accuracy is measured
against.  Base-2 logarithms are used throughout.

Simplification drops every symptom whose score is not positive and
recomputes the threshold over the retained set (the absence terms of
dropped symptoms leave the boundary).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

import numpy as np

from .clustering import Cluster, ClusterQuantification, JointClusteringModel
from .inference import TreePass
from .model import CategoricalDataset


@dataclass(frozen=True)
class RuleItem:
    symptom: str
    score: float


@dataclass(frozen=True)
class ClassificationRule:
    syndrome_name: str
    positive_label: str
    prior: float
    items: tuple[RuleItem, ...]
    threshold: float
    accuracy: float | None
    positive_states: tuple[int, ...]
    eval_states: tuple[int, ...] | None = None  # subtype rules score within these

    @property
    def symptom_ids(self) -> tuple[str, ...]:
        return tuple(i.symptom for i in self.items)

    def score_of(self, symptom: str) -> float:
        for i in self.items:
            if i.symptom == symptom:
                return i.score
        raise KeyError(f"rule has no item {symptom!r}")


@dataclass(frozen=True)
class RuleDecision:
    total_score: float
    decision: str                     # "positive" | "negative"
    contributions: dict[str, float]   # present symptoms only

    @property
    def positive(self) -> bool:
        return self.decision == "positive"


def _check_open_unit(name, value):
    if not 0.0 < value < 1.0:
        raise ValueError(f"{name} = {value} must lie strictly inside (0, 1); "
                         "smooth the quantification first")


def symptom_score(p: float, q: float) -> float:
    """log2 weight of evidence of a present symptom."""
    _check_open_unit("p", p)
    _check_open_unit("q", q)
    return float(np.log2(p * (1 - q) / (q * (1 - p))))


def absence_term(p: float, q: float) -> float:
    return float(np.log2((1 - q) / (1 - p)))


def _threshold(prior: float, pairs: Iterable[tuple[float, float]]) -> float:
    return float(np.log2((1 - prior) / prior)
                 + sum(absence_term(p, q) for p, q in pairs))


def _mi_order(symptoms, quant: ClusterQuantification):
    mi = quant.mi_table
    return sorted(symptoms, key=lambda s: (-mi.get(s, 0.0), s))


def _pick_aggregates(quant: ClusterQuantification, positive: str | None,
                     negative: str | None) -> tuple[Cluster, Cluster, float, bool]:
    if positive is None and negative is None:
        if len(quant.clusters) != 2 or len(quant.positive_labels) != 1:
            raise ValueError(
                "quantification must have exactly one positive and one negative "
                "cluster; merge subclusters first or name the pair explicitly")
        pos = quant.cluster(quant.positive_labels[0])
        neg = next(c for c in quant.clusters if c.label != pos.label)
        return pos, neg, pos.prevalence, False
    if positive is None or negative is None:
        raise ValueError("name both the positive and the negative cluster")
    pos, neg = quant.cluster(positive), quant.cluster(negative)
    prior = pos.prevalence / (pos.prevalence + neg.prevalence)
    return pos, neg, prior, True


def derive_rule(quant: ClusterQuantification, positive: str | None = None,
                negative: str | None = None) -> ClassificationRule:
    """Rule over all mapped symptoms (no pruning yet).

    Without arguments the quantification must reduce to one positive and
    one negative aggregate.  Naming two cluster labels derives a subtype
    rule instead: the prior becomes the conditional prevalence of the
    positive subcluster within the pair, and accuracy is later measured
    only on cases the model assigns to the pair.
    """
    pos, neg, prior, subtype = _pick_aggregates(quant, positive, negative)
    _check_open_unit("prior", prior)
    symptoms = _mi_order(pos.probabilities, quant)
    items = tuple(RuleItem(s, symptom_score(pos.probabilities[s], neg.probabilities[s]))
                  for s in symptoms)
    threshold = _threshold(prior, ((pos.probabilities[s], neg.probabilities[s])
                                   for s in symptoms))
    return ClassificationRule(
        quant.syndrome_name, pos.label, prior, items, threshold, None,
        positive_states=pos.states,
        eval_states=tuple(sorted(pos.states + neg.states)) if subtype else None)


def simplify_rule(rule: ClassificationRule, quant: ClusterQuantification,
                  joint: JointClusteringModel | None = None,
                  dataset: CategoricalDataset | None = None) -> ClassificationRule:
    """Drop non-positive scores and recompute the threshold over the rest.

    When the joint model and dataset are supplied, the simplified rule's
    accuracy is evaluated and recorded.
    """
    kept = [i for i in rule.items if i.score > 0.0]
    if not kept:
        raise ValueError("rule simplification dropped every item; "
                         "the quantification does not separate the clusters")
    pos = quant.cluster(rule.positive_label)
    neg_candidates = [c for c in quant.clusters
                      if rule.eval_states is not None
                      and c.label != rule.positive_label
                      and set(c.states) <= set(rule.eval_states)]
    if rule.eval_states is not None and neg_candidates:
        neg = neg_candidates[0]
    else:
        neg = next(c for c in quant.clusters if c.label != rule.positive_label)
    order = {s: k for k, s in enumerate(_mi_order([i.symptom for i in kept], quant))}
    kept.sort(key=lambda i: order[i.symptom])
    threshold = _threshold(rule.prior, ((pos.probabilities[i.symptom],
                                         neg.probabilities[i.symptom]) for i in kept))
    out = replace(rule, items=tuple(kept), threshold=threshold)
    if joint is not None and dataset is not None:
        out = replace(out, accuracy=evaluate_rule_accuracy(out, joint, dataset))
    return out


def _present_set(case) -> set[str]:
    if isinstance(case, Mapping):
        return {s for s, v in case.items() if v}
    return set(case)


def apply_rule(rule: ClassificationRule, case) -> RuleDecision:
    """Score one case: a presence mapping or an iterable of present symptoms.

    Symptoms missing from the case count as absent; names the rule does
    not know are ignored with a warning.
    """
    present = _present_set(case)
    known = set(rule.symptom_ids)
    stray = present - known
    if stray:
        warnings.warn(f"ignoring symptoms unknown to rule {rule.syndrome_name!r}: "
                      f"{sorted(stray)}", stacklevel=2)
    contributions = {i.symptom: i.score for i in rule.items if i.symptom in present}
    total = float(sum(contributions.values()))
    decision = "positive" if total >= rule.threshold else "negative"
    return RuleDecision(total, decision, contributions)


def evaluate_rule_accuracy(rule: ClassificationRule, joint: JointClusteringModel,
                           dataset: CategoricalDataset) -> float:
    """Multiplicity-weighted agreement of the rule with the model's MAP
    cluster assignment on the dataset."""
    want = sorted(joint.model.manifest_ids)
    missing = [v for v in want if v not in dataset.variable_ids]
    if missing:
        raise ValueError(f"dataset lacks model variables: {missing}")
    data = dataset.restrict(want) if list(dataset.variable_ids) != want else dataset
    tp = TreePass(joint.model, data)
    assignment = np.argmax(tp.posteriors(joint.joint_id), axis=1)
    model_positive = np.isin(assignment, rule.positive_states)

    scores = np.zeros(data.n_cases)
    for item in rule.items:
        if item.symptom in data.variable_ids:
            scores += item.score * (data.column(item.symptom) == 1)
    rule_positive = scores >= rule.threshold

    mask = (np.isin(assignment, rule.eval_states)
            if rule.eval_states is not None else np.ones(data.n_cases, dtype=bool))
    weights = data.counts[mask]
    if weights.sum() == 0:
        return float("nan")
    agree = (rule_positive == model_positive)[mask]
    return float(np.dot(agree, weights) / weights.sum())


# -- rounding-band helpers ---------------------------------------------------
#
# Published reference statistics are 2-dp roundings of the underlying
# probabilities and the published scores/thresholds are 1-dp roundings of
# the derived values, so reproduction checks work on intervals: the score
# interval over p, q rounding bands must overlap the published value's own
# rounding band.

PROB_ROUNDING = 0.005
SCORE_ROUNDING = 0.05


def _clip_open(x):
    return float(np.clip(x, 1e-9, 1 - 1e-9))


def score_interval(p: float, q: float,
                   rounding: float = PROB_ROUNDING) -> tuple[float, float]:
    """Range of the symptom score over the (p, q) rounding bands."""
    lo = symptom_score(_clip_open(p - rounding), _clip_open(q + rounding))
    hi = symptom_score(_clip_open(p + rounding), _clip_open(q - rounding))
    return lo, hi


def threshold_interval(prior: float, pairs,
                       rounding: float = PROB_ROUNDING) -> tuple[float, float]:
    """Range of the threshold over the rounding bands of prior and (p, q)."""
    lo = _threshold(_clip_open(prior + rounding),
                    ((_clip_open(p - rounding), _clip_open(q + rounding))
                     for p, q in pairs))
    hi = _threshold(_clip_open(prior - rounding),
                    ((_clip_open(p + rounding), _clip_open(q - rounding))
                     for p, q in pairs))
    return lo, hi


def bands_overlap(interval: tuple[float, float], published: float,
                  rounding: float = SCORE_ROUNDING) -> bool:
    """Does the computed interval meet the published value's rounding band?"""
    lo, hi = interval
    return lo <= published + rounding and hi >= published - rounding
