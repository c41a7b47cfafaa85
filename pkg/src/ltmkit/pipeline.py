"""End-to-end orchestration: data in, artifact bundle out.

The pipeline learns a latent tree model from a CSV dataset, extracts
patterns, and then runs the per-syndrome chain declared by the mapping
file: build the joint clustering model, regroup direct symptoms, select
the cluster count, quantify, merge subclusters on request, derive and
simplify the classification rule, and evaluate its accuracy.  Everything
is written as JSON into the output directory; identical inputs and seed
give byte-identical artifacts.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from . import io
from .clustering import (
    JointClusteringModel,
    build_joint_model,
    merge_clusters,
    quantify,
    regroup_search,
    select_cardinality,
)
from .em import EMConfig
from .model import CategoricalDataset, forward_sample
from .patterns import extract_patterns
from .rules import ClassificationRule, derive_rule, simplify_rule
from .search import SearchConfig, _stable_seed, east_search


class PipelineError(RuntimeError):
    """Failure in a named pipeline stage."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"stage {stage!r}: {message}")
        self.stage = stage


@dataclass(frozen=True)
class ProjectConfig:
    dataset: Path
    output_dir: Path
    seed: int
    mapping: Path | None = None
    coverage: float = 0.95
    search: SearchConfig | None = None
    em: EMConfig | None = None

    def __post_init__(self):
        if not 0 < self.coverage <= 1:
            raise ValueError("coverage must lie in (0, 1]")

    def search_config(self) -> SearchConfig:
        base = self.search or SearchConfig()
        return SearchConfig(base.max_latent_cardinality, base.screening_em_iterations,
                            base.phase_em, self.seed, base.max_passes)

    def em_config(self, *tag) -> EMConfig:
        base = self.em or EMConfig()
        return EMConfig(base.max_iterations, base.tolerance, base.restarts,
                        _stable_seed(self.seed, *tag), base.smoothing)


def load_config(path) -> ProjectConfig:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if "seed" not in doc:
        raise io.DataFormatError(f"{path}: config requires an explicit 'seed'")
    base = Path(path).parent
    search = None
    if "search" in doc:
        s = doc["search"]
        search = SearchConfig(
            max_latent_cardinality=s.get("maxLatentCardinality", 8),
            screening_em_iterations=s.get("screeningEmIterations", 20),
            phase_em=_em_from_doc(s.get("phaseEm", {}), EMConfig(max_iterations=200,
                                                                 restarts=4)),
            seed=doc["seed"],
            max_passes=s.get("maxPasses", 50))
    em = _em_from_doc(doc.get("em", {}), EMConfig()) if "em" in doc else None
    return ProjectConfig(
        dataset=base / doc["dataset"],
        output_dir=base / doc["outputDir"],
        seed=int(doc["seed"]),
        mapping=(base / doc["mapping"]) if doc.get("mapping") else None,
        coverage=doc.get("coverage", 0.95),
        search=search,
        em=em)


def _em_from_doc(d: dict, base: EMConfig) -> EMConfig:
    return EMConfig(max_iterations=d.get("maxIterations", base.max_iterations),
                    tolerance=d.get("tolerance", base.tolerance),
                    restarts=d.get("restarts", base.restarts),
                    seed=base.seed,
                    smoothing=d.get("smoothing", base.smoothing))


@dataclass
class SyndromeArtifacts:
    name: str
    joint: JointClusteringModel
    quantification: "ClusterQuantification"
    rules: list[ClassificationRule] = field(default_factory=list)


@dataclass
class ArtifactBundle:
    model: "LatentTreeModel"
    patterns: list
    syndromes: list[SyndromeArtifacts]
    paths: list[Path]


def _slug(name: str) -> str:
    return name.lower().replace(" ", "_").replace("-", "_")


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PipelineError:
        raise
    except Exception as e:
        raise PipelineError(name, str(e)) from e


def run_syndrome(mapping, dataset: CategoricalDataset, config: ProjectConfig) -> SyndromeArtifacts:
    """The per-syndrome chain: joint model to simplified, evaluated rule."""
    name = mapping.syndrome_name
    em = config.em_config("syndrome", name)
    joint = _stage(f"build:{name}", build_joint_model, mapping, dataset, em)
    joint = _stage(f"regroup:{name}", regroup_search, joint, dataset, em)
    joint = _stage(f"cardinality:{name}", select_cardinality, joint, dataset, em)
    quant = _stage(f"quantify:{name}", quantify, joint, dataset, config.coverage)

    rules: list[ClassificationRule] = []
    if mapping.subtype_rule is not None:
        pos, neg = mapping.subtype_rule
        have = {c.label for c in quant.clusters}
        if {pos, neg} <= have:
            rule = _stage(f"rules:{name}", derive_rule, quant, pos, neg)
            rule = _stage(f"rules:{name}", simplify_rule, rule, quant, joint, dataset)
            rules.append(rule)
        else:
            warnings.warn(f"{name}: subtype rule {pos!r} vs {neg!r} skipped; "
                          f"clusters found: {sorted(have)}")
    if mapping.merge_labels:
        have = {c.label for c in quant.clusters}
        if set(mapping.merge_labels) <= have:
            quant = _stage(f"merge:{name}", merge_clusters, quant, mapping.merge_labels)
        else:
            warnings.warn(f"{name}: merge directive {list(mapping.merge_labels)} "
                          f"skipped; clusters found: {sorted(have)}")
    rule_quant = quant
    if len(rule_quant.clusters) > 2:
        # several positive subclusters and no directive: the main rule
        # separates their union from the negative cluster
        rule_quant = merge_clusters(quant, quant.positive_labels)
    rule = _stage(f"rules:{name}", derive_rule, rule_quant)
    rule = _stage(f"rules:{name}", simplify_rule, rule, rule_quant, joint, dataset)
    rules.insert(0, rule)
    return SyndromeArtifacts(name, joint, quant, rules)


def run_pipeline(config: ProjectConfig) -> ArtifactBundle:
    """Learn, interpret, cluster, and derive rules; write all artifacts."""
    dataset = _stage("ingest", io.ingest_csv, config.dataset)
    model = _stage("learn", east_search, dataset, config.search_config())
    patterns = _stage("interpret", extract_patterns, model, config.coverage)

    mappings = []
    if config.mapping is not None:
        mappings = _stage("mapping", io.read_mappings, config.mapping)
    if not mappings:
        warnings.warn("no syndrome mappings given: writing model and patterns only")

    syndromes = [run_syndrome(m, dataset, config) for m in mappings]

    out = Path(config.output_dir)
    (out / "quantifications").mkdir(parents=True, exist_ok=True)
    (out / "rules").mkdir(parents=True, exist_ok=True)
    (out / "joint_models").mkdir(parents=True, exist_ok=True)
    paths = [out / "model.json", out / "patterns.json"]
    io.write_model(model, out / "model.json")
    io.write_patterns(patterns, config.coverage, out / "patterns.json")
    for art in syndromes:
        slug = _slug(art.name)
        qp = out / "quantifications" / f"{slug}.json"
        io.write_quantification(art.quantification, qp)
        jp = out / "joint_models" / f"{slug}.json"
        io.write_model(art.joint.model, jp)
        paths += [qp, jp]
        for rule in art.rules:
            rp = out / "rules" / f"{_slug(rule.positive_label)}.json"
            io.write_rule(rule, rp)
            paths.append(rp)
    return ArtifactBundle(model, patterns, syndromes, paths)


def simulate(model_path, n: int, seed: int, out_path) -> CategoricalDataset:
    """Sample n cases from a stored model and write them as CSV."""
    model = _stage("simulate", io.read_model, model_path)
    ds = _stage("simulate", forward_sample, model, n, seed)
    _stage("simulate", io.write_csv, ds, out_path)
    return ds
