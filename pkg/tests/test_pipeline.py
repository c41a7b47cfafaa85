import json
from pathlib import Path

import numpy as np
import pytest

from ltmkit import io
from ltmkit.cli import main
from ltmkit.model import LatentTreeModel, latent_var, manifest_var
from ltmkit.pipeline import ProjectConfig, load_config, run_pipeline, simulate


def demo_generator():
    """Two latent symptom groups plus one shared direct symptom."""
    variables = [latent_var("g0"), latent_var("g1")]
    edges = [("g0", "g1")]
    tables = {"g0": np.array([0.45, 0.55]),
              "g1": np.array([[0.85, 0.15], [0.2, 0.8]])}
    spec = {
        "g0": {"lack of strength": (0.85, 0.15), "mental fatigue": (0.8, 0.1),
               "loose stool": (0.7, 0.2)},
        "g1": {"chest oppression": (0.8, 0.1), "palpitation": (0.75, 0.15),
               "short of breath": (0.85, 0.2)},
    }
    for lat, syms in spec.items():
        for s, (hi, lo) in syms.items():
            variables.append(manifest_var(s))
            edges.append((lat, s))
            tables[s] = np.array([[1 - lo, lo], [1 - hi, hi]])
    return LatentTreeModel(variables, edges, "g0", tables)


MAPPING_DOC = {
    "syndromes": [
        {
            "name": "Strength Depletion",
            "groups": [
                {"label": "fatigue", "symptoms": ["lack of strength", "mental fatigue"],
                 "provenance": "primary"},
                {"label": "stool", "symptoms": ["loose stool"], "provenance": "secondary"},
            ],
        },
        {
            "name": "Chest Burden",
            "groups": [
                {"label": "chest", "symptoms": ["chest oppression", "palpitation"],
                 "provenance": "primary"},
                {"label": "breath", "symptoms": ["short of breath"],
                 "provenance": "primary"},
            ],
        },
    ]
}


@pytest.fixture(scope="module")
def project(tmp_path_factory):
    root = tmp_path_factory.mktemp("project")
    io.write_model(demo_generator(), root / "generator.json")
    simulate(root / "generator.json", 600, 11, root / "survey.csv")
    (root / "mapping.json").write_text(json.dumps(MAPPING_DOC), encoding="utf-8")
    config = {
        "dataset": "survey.csv",
        "mapping": "mapping.json",
        "outputDir": "out",
        "seed": 23,
        "coverage": 0.95,
        "em": {"restarts": 4, "maxIterations": 150},
        "search": {"maxPasses": 10},
    }
    (root / "config.json").write_text(json.dumps(config), encoding="utf-8")
    return root


def read_tree(out: Path) -> dict[str, bytes]:
    return {str(p.relative_to(out)): p.read_bytes()
            for p in sorted(out.rglob("*.json"))}


class TestSimulate:
    def test_deterministic_csv(self, project):
        simulate(project / "generator.json", 100, 7, project / "a.csv")
        simulate(project / "generator.json", 100, 7, project / "b.csv")
        assert (project / "a.csv").read_bytes() == (project / "b.csv").read_bytes()

    def test_zero_cases(self, project):
        simulate(project / "generator.json", 0, 7, project / "z.csv")
        ds = io.ingest_csv                      # empty body is a format error
        with pytest.raises(io.DataFormatError):
            ds(project / "z.csv")


class TestRunPipeline:
    def test_golden_path_artifacts(self, project):
        config = load_config(project / "config.json")
        bundle = run_pipeline(config)
        out = project / "out"
        assert (out / "model.json").exists()
        assert (out / "patterns.json").exists()
        quants = sorted((out / "quantifications").glob("*.json"))
        rules = sorted((out / "rules").glob("*.json"))
        assert len(quants) == 2
        assert len(rules) == 2
        assert len(bundle.syndromes) == 2
        for art in bundle.syndromes:
            assert art.rules[0].accuracy is not None
            assert 0.5 <= art.rules[0].accuracy <= 1.0
        # the learned structure separates the two declared groups
        from ltmkit.search import sibling_partition
        part = sibling_partition(bundle.model)
        assert frozenset({"lack of strength", "mental fatigue", "loose stool"}) in part

    def test_rerun_is_byte_identical(self, project, tmp_path):
        config = load_config(project / "config.json")
        first = read_tree(project / "out")
        rerun_cfg = ProjectConfig(config.dataset, tmp_path / "out2", config.seed,
                                  config.mapping, config.coverage, config.search,
                                  config.em)
        run_pipeline(rerun_cfg)
        second = read_tree(tmp_path / "out2")
        assert first.keys() == second.keys()
        for k in first:
            assert first[k] == second[k], f"artifact {k} differs between runs"

    def test_unknown_mapping_symptom_fails_in_build_stage(self, project, tmp_path):
        bad = {"syndromes": [{"name": "Broken", "groups": [
            {"label": "g", "symptoms": ["no such symptom"]}]}]}
        (tmp_path / "bad.json").write_text(json.dumps(bad), encoding="utf-8")
        config = load_config(project / "config.json")
        cfg = ProjectConfig(config.dataset, tmp_path / "out", config.seed,
                            tmp_path / "bad.json", config.coverage,
                            config.search, config.em)
        from ltmkit.pipeline import PipelineError
        with pytest.raises(PipelineError, match="build:Broken.*no such symptom"):
            run_pipeline(cfg)

    def test_no_mappings_warns_but_produces_model(self, project, tmp_path):
        config = load_config(project / "config.json")
        cfg = ProjectConfig(config.dataset, tmp_path / "out", config.seed,
                            None, config.coverage, config.search, config.em)
        with pytest.warns(UserWarning, match="no syndrome mappings"):
            bundle = run_pipeline(cfg)
        assert (tmp_path / "out" / "model.json").exists()
        assert bundle.syndromes == []

    def test_config_requires_seed(self, tmp_path):
        (tmp_path / "c.json").write_text('{"dataset": "d.csv", "outputDir": "o"}',
                                         encoding="utf-8")
        with pytest.raises(io.DataFormatError, match="seed"):
            load_config(tmp_path / "c.json")


class TestCli:
    def test_simulate_and_classify(self, project, tmp_path, capsys):
        rc = main(["simulate", "--model", str(project / "generator.json"),
                   "-n", "50", "--seed", "3", "--out", str(tmp_path / "sim.csv")])
        assert rc == 0
        capsys.readouterr()  # drop the simulate status line
        from importlib.resources import files
        rules_dir = files("ltmkit") / "data" / "rules"
        rc = main(["classify", "--rules-dir", str(rules_dir),
                   "--symptoms", "sore waist or knees,lassitude of limbs or body,"
                   "frequent nocturnal urination,palpitation"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        yang = [d for d in payload[0]["decisions"]
                if d["positiveLabel"] == "Yang Deficiency"][0]
        assert yang["totalScore"] == pytest.approx(11.5)
        assert yang["decision"] == "positive"

    def test_usage_error_exit_code(self):
        with pytest.raises(SystemExit) as exc:
            main(["learn", "--data"])
        assert exc.value.code == 1

    def test_data_error_exit_code(self, tmp_path, capsys):
        missing = tmp_path / "nope.csv"
        rc = main(["learn", "--data", str(missing), "--out", str(tmp_path / "m.json")])
        assert rc == 2

    def test_rules_subcommand_writes_artifacts(self, project, tmp_path, capsys):
        rc = main(["rules", "--data", str(project / "survey.csv"),
                   "--mapping", str(project / "mapping.json"),
                   "--out", str(tmp_path / "art"), "--seed", "5"])
        assert rc == 0
        rules = sorted((tmp_path / "art" / "rules").glob("*.json"))
        quants = sorted((tmp_path / "art" / "quantifications").glob("*.json"))
        assert len(rules) == 2 and len(quants) == 2
        loaded = io.read_rules_dir(tmp_path / "art" / "rules")
        assert all(r.accuracy is not None for r in loaded)

    def test_interpret_roundtrip(self, project, tmp_path, capsys):
        rc = main(["interpret", "--model", str(project / "generator.json"),
                   "--out", str(tmp_path / "patterns.json"), "--coverage", "0.9"])
        assert rc == 0
        doc = json.loads((tmp_path / "patterns.json").read_text(encoding="utf-8"))
        assert {p["latent"] for p in doc["patterns"]} == {"g0", "g1"}
