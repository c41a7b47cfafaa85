"""File formats: CSV datasets and JSON documents for every artifact.

CSV: UTF-8, comma-separated, mandatory header row of symptom names, LF
line endings, integer category codes in the body.  Duplicate rows
consolidate into multiplicities on ingestion.

JSON documents (models, patterns, quantifications, rules, mappings) are
written with sorted keys and shortest round-trip float representation, so
a written file re-read compares equal to its in-memory source and two
identical runs produce byte-identical artifacts.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .clustering import (
    Cluster,
    ClusterQuantification,
    SymptomGroup,
    SyndromeMapping,
)
from .model import CategoricalDataset, LatentTreeModel, Variable
from .patterns import Pattern, PatternGroup
from .rules import ClassificationRule, RuleItem


class DataFormatError(ValueError):
    """Malformed input file (CSV or JSON document)."""


# -- CSV -----------------------------------------------------------------


def _sanitize(name: str) -> str:
    return name.replace(",", " ").replace("\n", " ").replace("\r", " ").strip()


def ingest_csv(path) -> CategoricalDataset:
    """Read a categorical dataset; cardinalities inferred as max code + 1."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = [ln for ln in text.split("\n") if ln.strip() != ""]
    if not lines:
        raise DataFormatError(f"{path}: empty file")
    header = [h.strip() for h in lines[0].split(",")]
    if any(h == "" for h in header):
        raise DataFormatError(f"{path}: blank column name in header")
    rows = []
    for lineno, ln in enumerate(lines[1:], start=2):
        cells = ln.split(",")
        if len(cells) != len(header):
            raise DataFormatError(
                f"{path}: row {lineno} has {len(cells)} cells, expected {len(header)}")
        row = []
        for col, cell in zip(header, cells):
            cell = cell.strip()
            try:
                row.append(int(cell))
            except ValueError:
                raise DataFormatError(
                    f"{path}: row {lineno}, column {col!r}: "
                    f"non-integer cell {cell!r}") from None
        rows.append(row)
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    values = np.array(rows, dtype=np.int64)
    if values.min() < 0:
        raise DataFormatError(f"{path}: negative category code")
    cards = np.maximum(values.max(axis=0) + 1, 2)
    schema = tuple(Variable(h, h, int(c), "manifest") for h, c in zip(header, cards))
    return CategoricalDataset(schema, values)


def write_csv(dataset: CategoricalDataset, path) -> None:
    """Expand multiplicities back out; one row per observation."""
    path = Path(path)
    lines = [",".join(_sanitize(v.name) for v in dataset.schema)]
    for i in range(dataset.n_cases):
        row = ",".join(str(int(x)) for x in dataset.values[i])
        lines.extend([row] * int(dataset.counts[i]))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


# -- JSON helpers ---------------------------------------------------------


def _dump(doc, path=None) -> str:
    text = json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def _load(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DataFormatError(f"{path}: invalid JSON ({e})") from None


# -- models -----------------------------------------------------------------


def model_to_doc(model: LatentTreeModel) -> dict:
    return {
        "variables": [{"id": v.id, "name": v.name, "cardinality": v.cardinality,
                       "kind": v.kind} for v in model.variables.values()],
        "edges": [list(e) for e in model.edges],
        "root": model.root,
        "tables": {vid: t.tolist() for vid, t in model.tables.items()},
    }


def model_from_doc(doc: dict) -> LatentTreeModel:
    try:
        variables = [Variable(v["id"], v["name"], v["cardinality"], v["kind"])
                     for v in doc["variables"]]
        return LatentTreeModel(variables, [tuple(e) for e in doc["edges"]],
                               doc["root"], {k: np.array(t) for k, t in doc["tables"].items()})
    except (KeyError, TypeError) as e:
        raise DataFormatError(f"malformed model document: {e}") from None


def write_model(model, path):
    _dump(model_to_doc(model), path)


def read_model(path) -> LatentTreeModel:
    return model_from_doc(_load(path))


# -- patterns -----------------------------------------------------------------


def patterns_to_doc(patterns: list[Pattern], coverage: float) -> dict:
    return {
        "coverage": coverage,
        "patterns": [{
            "latent": p.latent_id,
            "kind": p.kind,
            "groups": [{"label": g.label, "symptoms": list(g.symptoms)}
                       for g in p.groups],
            "stateProfile": {str(k): dict(sorted(v.items()))
                             for k, v in p.state_profile.items()},
            "mi": dict(sorted(p.mi_table.items())),
            "notes": list(p.notes),
        } for p in patterns],
    }


def patterns_from_doc(doc: dict) -> list[Pattern]:
    out = []
    for p in doc["patterns"]:
        groups = tuple(PatternGroup(g["label"], tuple(g["symptoms"]))
                       for g in p["groups"])
        out.append(Pattern(p["latent"], p["kind"], groups,
                           {int(k): v for k, v in p["stateProfile"].items()},
                           p["mi"], tuple(p.get("notes", []))))
    return out


def write_patterns(patterns, coverage, path):
    _dump(patterns_to_doc(patterns, coverage), path)


# -- quantifications -----------------------------------------------------------


def quantification_to_doc(q: ClusterQuantification) -> dict:
    return {
        "syndrome": q.syndrome_name,
        "clusters": [{"label": c.label, "states": list(c.states),
                      "prevalence": c.prevalence,
                      "probabilities": dict(sorted(c.probabilities.items()))}
                     for c in q.clusters],
        "positiveClusters": list(q.positive_labels),
        "symptomOrder": list(q.symptom_order),
        "mi": dict(sorted(q.mi_table.items())),
        "coverage": q.coverage_cutoff,
    }


def quantification_from_doc(doc: dict) -> ClusterQuantification:
    try:
        clusters = tuple(Cluster(c["label"], tuple(c["states"]), c["prevalence"],
                                 dict(c["probabilities"])) for c in doc["clusters"])
        return ClusterQuantification(doc["syndrome"], clusters,
                                     tuple(doc["positiveClusters"]),
                                     tuple(doc["symptomOrder"]), dict(doc["mi"]),
                                     doc["coverage"])
    except (KeyError, TypeError) as e:
        raise DataFormatError(f"malformed quantification document: {e}") from None


def write_quantification(q, path):
    _dump(quantification_to_doc(q), path)


def read_quantification(path) -> ClusterQuantification:
    return quantification_from_doc(_load(path))


# -- rules -----------------------------------------------------------------


def rule_to_doc(rule: ClassificationRule) -> dict:
    doc = {
        "syndrome": rule.syndrome_name,
        "positiveLabel": rule.positive_label,
        "prior": rule.prior,
        "items": [{"symptom": i.symptom, "score": i.score} for i in rule.items],
        "threshold": rule.threshold,
        "accuracy": rule.accuracy,
        "positiveStates": list(rule.positive_states),
    }
    if rule.eval_states is not None:
        doc["evalStates"] = list(rule.eval_states)
    return doc


def rule_from_doc(doc: dict) -> ClassificationRule:
    try:
        items = tuple(RuleItem(i["symptom"], i["score"]) for i in doc["items"])
        return ClassificationRule(
            doc["syndrome"], doc["positiveLabel"], doc["prior"], items,
            doc["threshold"], doc.get("accuracy"),
            tuple(doc.get("positiveStates", [0])),
            tuple(doc["evalStates"]) if "evalStates" in doc else None)
    except (KeyError, TypeError) as e:
        raise DataFormatError(f"malformed rule document: {e}") from None


def write_rule(rule, path):
    _dump(rule_to_doc(rule), path)


def read_rule(path) -> ClassificationRule:
    return rule_from_doc(_load(path))


def read_rules_dir(path) -> list[ClassificationRule]:
    files = sorted(Path(path).glob("*.json"))
    rules = [read_rule(f) for f in files]
    if not rules:
        raise DataFormatError(f"{path}: no rule files found")
    return rules


# -- syndrome mappings -----------------------------------------------------


def mapping_to_doc(mapping: SyndromeMapping) -> dict:
    doc = {
        "name": mapping.syndrome_name,
        "groups": [{"label": g.label, "symptoms": list(g.symptoms),
                    "provenance": g.provenance} for g in mapping.groups],
    }
    if mapping.merge_labels:
        doc["merge"] = list(mapping.merge_labels)
    if mapping.subtype_rule:
        doc["subtypeRule"] = {"positive": mapping.subtype_rule[0],
                              "negative": mapping.subtype_rule[1]}
    return doc


def mapping_from_doc(doc: dict) -> SyndromeMapping:
    try:
        groups = tuple(SymptomGroup(g["label"], tuple(g["symptoms"]),
                                    g.get("provenance", "primary"))
                       for g in doc["groups"])
        subtype = None
        if "subtypeRule" in doc:
            subtype = (doc["subtypeRule"]["positive"], doc["subtypeRule"]["negative"])
        return SyndromeMapping(doc["name"], groups,
                               tuple(doc.get("merge", [])), subtype)
    except (KeyError, TypeError) as e:
        raise DataFormatError(f"malformed mapping document: {e}") from None


def read_mappings(path) -> list[SyndromeMapping]:
    doc = _load(path)
    if "syndromes" not in doc:
        raise DataFormatError(f"{path}: mapping file needs a 'syndromes' list")
    return [mapping_from_doc(m) for m in doc["syndromes"]]


def write_mappings(mappings, path):
    _dump({"syndromes": [mapping_to_doc(m) for m in mappings]}, path)
