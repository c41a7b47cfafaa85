import numpy as np
import pytest

from ltmkit import io
from ltmkit.clustering import SymptomGroup, SyndromeMapping
from ltmkit.fixtures import (
    generator_model,
    reference_quantification,
    reference_rule,
)
from ltmkit.model import forward_sample
from ltmkit.patterns import extract_patterns

from conftest import make_naive_bayes


class TestCsv:
    def test_duplicate_rows_consolidate(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("a,b\n0,1\n0,1\n", encoding="utf-8")
        ds = io.ingest_csv(f)
        assert ds.n_cases == 1
        assert ds.counts.tolist() == [2]
        assert ds.total_n == 2

    def test_non_integer_cell_named(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("a,b\n0,yes\n", encoding="utf-8")
        with pytest.raises(io.DataFormatError, match=r"row 2, column 'b'"):
            io.ingest_csv(f)

    def test_ragged_row_rejected(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("a,b\n0,1,1\n", encoding="utf-8")
        with pytest.raises(io.DataFormatError, match="row 2"):
            io.ingest_csv(f)

    def test_empty_file_rejected(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("", encoding="utf-8")
        with pytest.raises(io.DataFormatError, match="empty"):
            io.ingest_csv(f)

    def test_cardinality_inferred_with_floor(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("a,b\n0,2\n0,0\n", encoding="utf-8")
        ds = io.ingest_csv(f)
        assert ds.schema[0].cardinality == 2   # all-zero column still binary
        assert ds.schema[1].cardinality == 3

    def test_round_trip_desk_scale(self, tmp_path):
        m = make_naive_bayes(
            [0.38, 0.62], {f"s{i:02d}": [0.6 + 0.003 * i, 0.2] for i in range(93)})
        ds = forward_sample(m, 803, seed=17)
        f = tmp_path / "survey.csv"
        io.write_csv(ds, f)
        again = io.ingest_csv(f)
        assert again == ds
        io.write_csv(again, tmp_path / "survey2.csv")
        assert (tmp_path / "survey.csv").read_bytes() == (
            tmp_path / "survey2.csv").read_bytes()


class TestJsonRoundTrips:
    def test_model(self, tmp_path):
        m = generator_model("Yang Deficiency").model
        io.write_model(m, tmp_path / "m.json")
        again = io.read_model(tmp_path / "m.json")
        assert sorted(again.variables) == sorted(m.variables)
        assert again.edges == m.edges
        assert again.root == m.root
        for vid in m.variables:
            assert np.array_equal(again.tables[vid], m.tables[vid])

    def test_quantification(self, tmp_path):
        q = reference_quantification("Yin Deficiency")
        io.write_quantification(q, tmp_path / "q.json")
        again = io.read_quantification(tmp_path / "q.json")
        assert again == q

    def test_rule(self, tmp_path):
        r = reference_rule("Yin Deficiency II")
        io.write_rule(r, tmp_path / "r.json")
        again = io.read_rule(tmp_path / "r.json")
        assert again == r

    def test_patterns(self, tmp_path):
        m = make_naive_bayes([0.4, 0.6], {"s1": [0.8, 0.1], "s2": [0.75, 0.2]})
        pats = extract_patterns(m, coverage=1.0)
        io.write_patterns(pats, 1.0, tmp_path / "p.json")
        doc = io._load(tmp_path / "p.json")
        again = io.patterns_from_doc(doc)
        assert again == pats

    def test_mapping(self, tmp_path):
        mapping = SyndromeMapping(
            "Yin Deficiency",
            (SymptomGroup("eyes", ("blurred vision", "dry eyes"), "primary"),
             SymptomGroup("waist", ("sore waist or knees",), "secondary")),
            merge_labels=("Yin Deficiency I", "Yin Deficiency II"),
            subtype_rule=("Yin Deficiency II", "Yin Deficiency I"))
        io.write_mappings([mapping], tmp_path / "map.json")
        (again,) = io.read_mappings(tmp_path / "map.json")
        assert again == mapping

    def test_malformed_rule_rejected(self, tmp_path):
        (tmp_path / "bad.json").write_text('{"syndrome": "X"}', encoding="utf-8")
        with pytest.raises(io.DataFormatError, match="malformed rule"):
            io.read_rule(tmp_path / "bad.json")

    def test_rules_dir_requires_rules(self, tmp_path):
        with pytest.raises(io.DataFormatError, match="no rule files"):
            io.read_rules_dir(tmp_path)


class TestPackagedData:
    def test_shipped_rules_load(self):
        from importlib.resources import files
        rules_dir = files("ltmkit") / "data" / "rules"
        rules = io.read_rules_dir(rules_dir)
        names = {r.positive_label for r in rules}
        assert "Yang Deficiency" in names
        assert "Yin Deficiency II" in names
        assert len(rules) == 9

    def test_shipped_quantifications_match_fixtures(self):
        from importlib.resources import files
        qdir = files("ltmkit") / "data" / "quantifications"
        q = io.read_quantification(qdir / "yang_deficiency.json")
        assert q == reference_quantification("Yang Deficiency")
