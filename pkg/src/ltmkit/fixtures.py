"""Bundled reference statistics for eight TCM syndrome types.

These blocks quantify syndrome clusters found in a dichotomous symptom
survey of patients with vascular mild cognitive impairment: the
prevalence of each cluster and the per-cluster occurrence probability of
its most informative symptoms (2-dp), together with the published
score-based classification rules (1-dp scores and thresholds).

They serve three purposes: regression targets for the rule derivation
arithmetic, generator models for desk-scale sampling experiments, and a
ready-made rule set for the scoring server and its UI.

Run ``python -m ltmkit.fixtures <directory>`` to materialize everything
as JSON files (the packaged copies under ``ltmkit/data`` were produced
this way).
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from .clustering import (
    ClusterQuantification,
    JointClusteringModel,
    SymptomGroup,
    SyndromeMapping,
    merge_clusters,
    quantify,
)
from .model import LatentTreeModel, latent_var, manifest_var
from .rules import ClassificationRule, RuleItem

# syndrome -> (cluster label, prevalence, {symptom: P(s=1 | cluster)})
# listed positive clusters first, in importance order of the source blocks
REFERENCE_BLOCKS: dict[str, list[tuple[str, float, dict[str, float]]]] = {
    "Yang Deficiency": [
        ("Yang Deficiency", 0.38, {
            "sore waist or knees": 0.77,
            "lassitude of limbs or body": 0.69,
            "frequent nocturnal urination": 0.68,
            "blackish lower eyelid": 0.27,
            "fear of cold or cold limbs": 0.44,
            "palpitation": 0.45,
            "chest oppression": 0.51,
            "thirst desire hot drinks": 0.32,
            "spontaneous sweating": 0.38,
        }),
        ("non-Yang Deficiency", 0.62, {
            "sore waist or knees": 0.21,
            "lassitude of limbs or body": 0.25,
            "frequent nocturnal urination": 0.28,
            "blackish lower eyelid": 0.02,
            "fear of cold or cold limbs": 0.12,
            "palpitation": 0.13,
            "chest oppression": 0.20,
            "thirst desire hot drinks": 0.08,
            "spontaneous sweating": 0.13,
        }),
    ],
    "Yin Deficiency": [
        ("Yin Deficiency I", 0.38, {
            "sore waist or knees": 0.75,
            "blurred vision": 0.78,
            "dry eyes": 0.62,
            "vexing heat in chest": 0.08,
            "fetid mouth odor": 0.10,
            "tidal fever or night sweat": 0.08,
            "insomnia": 0.54,
            "tinnitus resemble cicada": 0.43,
            "dreamfulness": 0.59,
            "spontaneous sweating": 0.18,
        }),
        ("Yin Deficiency II", 0.08, {
            "sore waist or knees": 0.75,
            "blurred vision": 0.52,
            "dry eyes": 0.37,
            "vexing heat in chest": 0.71,
            "fetid mouth odor": 0.71,
            "tidal fever or night sweat": 0.71,
            "insomnia": 0.77,
            "tinnitus resemble cicada": 0.43,
            "dreamfulness": 0.80,
            "spontaneous sweating": 0.79,
        }),
        ("non-Yin Deficiency", 0.54, {
            "sore waist or knees": 0.14,
            "blurred vision": 0.26,
            "dry eyes": 0.16,
            "vexing heat in chest": 0.06,
            "fetid mouth odor": 0.08,
            "tidal fever or night sweat": 0.08,
            "insomnia": 0.21,
            "tinnitus resemble cicada": 0.10,
            "dreamfulness": 0.29,
            "spontaneous sweating": 0.19,
        }),
    ],
    "Blood Deficiency": [
        ("Blood Deficiency", 0.32, {
            "blurred vision": 0.82,
            "dry eyes": 0.69,
            "palpitation": 0.56,
            "insomnia": 0.60,
            "dizziness": 0.62,
            "dreamfulness": 0.62,
            "numbness": 0.53,
            "trembling of limbs": 0.20,
            "dry stool or constipation": 0.47,
        }),
        ("non-Blood Deficiency", 0.68, {
            "blurred vision": 0.32,
            "dry eyes": 0.19,
            "palpitation": 0.11,
            "insomnia": 0.27,
            "dizziness": 0.39,
            "dreamfulness": 0.36,
            "numbness": 0.27,
            "trembling of limbs": 0.05,
            "dry stool or constipation": 0.23,
        }),
    ],
    "Blood Stasis": [
        ("Blood Stasis", 0.30, {
            "purple or darkish lips": 0.74,
            "dim complexion": 0.49,
            "blackish lower eyelid": 0.29,
            "numbness": 0.58,
            "palpitation": 0.42,
            "scaly skin": 0.19,
            "tongue with ecchymosis": 0.11,
        }),
        ("non-Blood Stasis", 0.70, {
            "purple or darkish lips": 0.08,
            "dim complexion": 0.10,
            "blackish lower eyelid": 0.04,
            "numbness": 0.25,
            "palpitation": 0.18,
            "scaly skin": 0.04,
            "tongue with ecchymosis": 0.02,
        }),
    ],
    "Qi Deficiency": [
        ("Qi Deficiency", 0.44, {
            "sore waist or knees": 0.70,
            "lack of strength": 0.73,
            "lassitude of limbs or body": 0.66,
            "short of breath": 0.62,
            "chest oppression": 0.54,
            "palpitation": 0.45,
            "insomnia": 0.58,
            "urinary incontinence": 0.38,
            "mental fatigue": 0.46,
            "dreamfulness": 0.61,
            "asthenia of defecation": 0.20,
        }),
        ("non-Qi Deficiency", 0.56, {
            "sore waist or knees": 0.21,
            "lack of strength": 0.29,
            "lassitude of limbs or body": 0.23,
            "short of breath": 0.20,
            "chest oppression": 0.15,
            "palpitation": 0.11,
            "insomnia": 0.23,
            "urinary incontinence": 0.09,
            "mental fatigue": 0.18,
            "dreamfulness": 0.31,
            "asthenia of defecation": 0.05,
        }),
    ],
    "Qi Stagnation": [
        ("Qi Stagnation", 0.35, {
            "chest oppression": 0.80,
            "short of breath": 0.77,
            "sighing": 0.42,
            "hypochondrium distension or pain": 0.20,
            "abdominal distension": 0.23,
            "dry stool or constipation": 0.35,
        }),
        ("non-Qi Stagnation", 0.65, {
            "chest oppression": 0.06,
            "short of breath": 0.18,
            "sighing": 0.12,
            "hypochondrium distension or pain": 0.02,
            "abdominal distension": 0.07,
            "dry stool or constipation": 0.29,
        }),
    ],
    "Fire-Heat": [
        ("Fire-Heat", 0.31, {
            "dry stool or constipation": 0.55,
            "insomnia": 0.62,
            "fetid mouth odor": 0.30,
            "agitation or short temper": 0.79,
            "trembling of limbs": 0.24,
            "acid swallow or epigastric upset": 0.31,
            "dreamfulness": 0.64,
            "spontaneous sweating": 0.39,
            "bitter taste in mouth": 0.50,
            "aphtha on mouth or tongue": 0.11,
        }),
        ("non-Fire-Heat", 0.69, {
            "dry stool or constipation": 0.20,
            "insomnia": 0.27,
            "fetid mouth odor": 0.06,
            "agitation or short temper": 0.48,
            "trembling of limbs": 0.03,
            "acid swallow or epigastric upset": 0.08,
            "dreamfulness": 0.36,
            "spontaneous sweating": 0.16,
            "bitter taste in mouth": 0.26,
            "aphtha on mouth or tongue": 0.01,
        }),
    ],
    "Phlegm-Dampness": [
        ("Phlegm-Dampness", 0.58, {
            "greasy tongue fur": 0.80,
            "slippery pulse": 0.60,
            "sticky or greasy feel in mouth": 0.29,
        }),
        ("non-Phlegm-Dampness", 0.42, {
            "greasy tongue fur": 0.03,
            "slippery pulse": 0.27,
            "sticky or greasy feel in mouth": 0.05,
        }),
    ],
}

# syndrome -> (positive label, items [(symptom, score)], threshold, accuracy,
#              optional (positive, negative) subtype pair)
REFERENCE_RULES: dict[str, dict] = {
    "Yang Deficiency": {
        "items": [
            ("sore waist or knees", 3.7),
            ("lassitude of limbs or body", 2.8),
            ("frequent nocturnal urination", 2.5),
            ("blackish lower eyelid", 3.8),
            ("palpitation", 2.5),
            ("fear of cold or cold limbs", 2.6),
            ("chest oppression", 2.0),
            ("thirst desire hot drinks", 2.4),
            ("spontaneous sweating", 2.0),
            ("dim complexion", 1.7),
            ("undigested food in stool", 2.6),
            ("muscular twitching", 1.4),
            ("pale complexion", 2.0),
            ("diarrhea before dawn", 2.1),
        ],
        "threshold": 9.1, "accuracy": 0.96,
    },
    "Yin Deficiency": {
        "items": [
            ("sore waist or knees", 4.2),
            ("blurred vision", 3.0),
            ("dry eyes", 2.8),
            ("tinnitus resemble cicada", 2.8),
            ("insomnia", 2.3),
            ("dreamfulness", 2.0),
            ("expectoration", 2.1),
            ("blackish lower eyelid", 3.2),
            ("palpitation", 1.9),
            ("dizziness", 1.6),
            ("dry stool or constipation", 1.4),
            ("vexing heat in chest", 1.9),
            ("trembling of limbs", 2.1),
            ("fetid mouth odor", 1.7),
            ("dim complexion", 1.0),
            ("tidal fever or night sweat", 1.3),
        ],
        "threshold": 10.6, "accuracy": 0.98,
    },
    "Yin Deficiency II": {
        "positive_label": "Yin Deficiency II",
        "subtype_of": "Yin Deficiency",
        "subtype_pair": ("Yin Deficiency II", "Yin Deficiency I"),
        "items": [
            ("tidal fever or night sweat", 4.9),
            ("vexing heat in chest", 4.7),
            ("fetid mouth odor", 4.5),
            ("spontaneous sweating", 4.1),
            ("dry tongue", 3.6),
            ("edema", 3.3),
            ("thirst desire no drinks", 2.8),
            ("fast pulse", 3.1),
            ("deep-red tongue", 3.3),
            ("dry stool or constipation", 1.9),
            ("swift digestion rapid hungering", 3.2),
        ],
        "threshold": 13.9, "accuracy": 0.97,
    },
    "Blood Deficiency": {
        "items": [
            ("blurred vision", 3.4),
            ("dry eyes", 3.2),
            ("palpitation", 3.4),
            ("insomnia", 2.0),
            ("dizziness", 1.7),
            ("dreamfulness", 1.6),
            ("numbness", 1.6),
            ("trembling of limbs", 2.4),
            ("dry stool or constipation", 1.5),
            ("thin pulse", 1.1),
            ("muscular twitching", 2.1),
            ("sallow complexion", 1.6),
            ("pale lips", 1.9),
            ("dizzy headache", 1.9),
            ("pale complexion", 2.0),
        ],
        "threshold": 10.6, "accuracy": 0.98,
    },
    "Blood Stasis": {
        "items": [
            ("purple or darkish lips", 5.2),
            ("dim complexion", 3.1),
            ("blackish lower eyelid", 3.1),
            ("numbness", 2.0),
            ("palpitation", 1.7),
            ("scaly skin", 2.5),
            ("tongue with ecchymosis", 2.7),
            ("darkish tongue", 1.0),
        ],
        "threshold": 6.4, "accuracy": 0.98,
    },
    "Qi Deficiency": {
        "items": [
            ("sore waist or knees", 3.2),
            ("lack of strength", 2.7),
            ("lassitude of limbs or body", 2.7),
            ("short of breath", 2.7),
            ("chest oppression", 2.8),
            ("palpitation", 2.8),
            ("insomnia", 2.2),
            ("urinary incontinence", 2.7),
            ("dreamfulness", 1.8),
            ("mental fatigue", 2.0),
            ("asthenia of defecation", 2.4),
            ("sunken pulse", 1.4),
            ("dizziness", 1.3),
            ("spontaneous sweating", 1.4),
            ("dripping urination", 1.7),
            ("feeble pulse", 2.4),
            ("thin pulse", 1.2),
            ("dizzy headache", 2.2),
        ],
        "threshold": 13.0, "accuracy": 0.96,
    },
    "Qi Stagnation": {
        "items": [
            ("chest oppression", 5.8),
            ("short of breath", 3.9),
            ("sighing", 2.4),
            ("hypochondrium distension or pain", 3.4),
            ("abdominal distension", 2.0),
            ("dry stool or constipation", 0.4),
        ],
        "threshold": 6.2, "accuracy": 0.97,
    },
    "Fire-Heat": {
        "items": [
            ("dry stool or constipation", 2.2),
            ("insomnia", 2.1),
            ("fetid mouth odor", 2.6),
            ("agitation or short temper", 2.0),
            ("trembling of limbs", 3.1),
            ("acid swallow or epigastric upset", 2.4),
            ("dreamfulness", 1.6),
            ("spontaneous sweating", 1.9),
            ("bitter taste in mouth", 1.6),
            ("aphtha on mouth or tongue", 4.1),
            ("dizziness", 1.5),
            ("dripping urination", 1.6),
            ("dry tongue", 1.7),
            ("thirst desire cold drinks", 2.5),
            ("throbbing headache", 2.1),
        ],
        "threshold": 9.1, "accuracy": 0.94,
    },
    "Phlegm-Dampness": {
        "items": [
            ("greasy tongue fur", 7.1),
            ("slippery pulse", 2.1),
            ("sticky or greasy feel in mouth", 2.8),
            ("thick tongue fur", 1.5),
            ("dizzy headache", 1.8),
            ("tooth-marked tongue", 1.0),
            ("fat tongue", 1.0),
            ("urinary incontinence", 0.6),
        ],
        "threshold": 3.7, "accuracy": 0.97,
    },
}

SYNDROME_NAMES = tuple(REFERENCE_BLOCKS)


def generator_model(name: str) -> JointClusteringModel:
    """Naive-Bayes joint model whose parameters equal a reference block."""
    blocks = REFERENCE_BLOCKS[name]
    symptoms = sorted(blocks[0][2])
    prior = np.array([prev for _, prev, _ in blocks])
    variables = [latent_var("Z", len(blocks))] + [manifest_var(s) for s in symptoms]
    edges = [("Z", s) for s in symptoms]
    tables = {"Z": prior}
    for s in symptoms:
        p = np.array([probs[s] for _, _, probs in blocks])
        tables[s] = np.stack([1.0 - p, p], axis=1)
    model = LatentTreeModel(variables, edges, "Z", tables)
    mapping = SyndromeMapping(
        name, tuple(SymptomGroup(s, (s,), "primary") for s in symptoms))
    feature_map = {s: "direct" for s in symptoms}
    return JointClusteringModel(model, "Z", feature_map, mapping)


def reference_quantification(name: str, coverage: float = 1.0) -> ClusterQuantification:
    """The block as a ClusterQuantification (read back through the model)."""
    return quantify(generator_model(name), coverage=coverage)


def reference_rule(name: str) -> ClassificationRule:
    """The published rule document for a syndrome (scores as published)."""
    spec = REFERENCE_RULES[name]
    items = tuple(RuleItem(s, w) for s, w in spec["items"])
    syndrome = spec.get("subtype_of", name)
    positive_label = spec.get("positive_label", name)
    if "subtype_pair" in spec:
        blocks = REFERENCE_BLOCKS[syndrome]
        labels = [lbl for lbl, _, _ in blocks]
        pos_state = labels.index(spec["subtype_pair"][0])
        neg_state = labels.index(spec["subtype_pair"][1])
        prev = {lbl: prev for lbl, prev, _ in blocks}
        prior = prev[spec["subtype_pair"][0]] / (
            prev[spec["subtype_pair"][0]] + prev[spec["subtype_pair"][1]])
        return ClassificationRule(syndrome, positive_label, prior, items,
                                  spec["threshold"], spec["accuracy"],
                                  (pos_state,), tuple(sorted((pos_state, neg_state))))
    prior = REFERENCE_BLOCKS[name][0][1]
    pos_states = tuple(range(len(REFERENCE_BLOCKS[name]) - 1))
    return ClassificationRule(syndrome, positive_label, prior, items,
                              spec["threshold"], spec["accuracy"], pos_states, None)


def reference_rules() -> list[ClassificationRule]:
    return [reference_rule(n) for n in REFERENCE_RULES]


def quantified_rule_pairs(name: str) -> list[tuple[str, float, float, float]]:
    """(symptom, published score, p, q) for rule items with quantified stats.

    Positive subclusters are merged first, matching how the main rule of a
    multi-cluster syndrome is derived; the subtype rule is handled
    separately by its block pair.
    """
    q = reference_quantification(name)
    if len(q.clusters) > 2:
        q = merge_clusters(q, q.positive_labels)
    pos = q.cluster(q.positive_labels[0]).probabilities
    neg = next(c for c in q.clusters if c.label not in q.positive_labels).probabilities
    out = []
    for symptom, score in REFERENCE_RULES[name]["items"]:
        if symptom in pos and symptom in neg:
            out.append((symptom, score, pos[symptom], neg[symptom]))
    return out


def export(directory) -> list[Path]:
    """Materialize quantifications, generator models and rules as JSON."""
    from .io import write_model, write_quantification, write_rule

    directory = Path(directory)
    written = []
    qdir = directory / "quantifications"
    mdir = directory / "models"
    rdir = directory / "rules"
    for d in (qdir, mdir, rdir):
        d.mkdir(parents=True, exist_ok=True)
    for name in SYNDROME_NAMES:
        slug = name.lower().replace(" ", "_").replace("-", "_")
        q = reference_quantification(name)
        write_quantification(q, qdir / f"{slug}.json")
        write_model(generator_model(name).model, mdir / f"{slug}.json")
        written += [qdir / f"{slug}.json", mdir / f"{slug}.json"]
    for name in REFERENCE_RULES:
        slug = name.lower().replace(" ", "_").replace("-", "_")
        write_rule(reference_rule(name), rdir / f"{slug}.json")
        written.append(rdir / f"{slug}.json")
    return written


if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else "."
    for f in export(target):
        print(f)
