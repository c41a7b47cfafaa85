import numpy as np
import pytest

from ltmkit.inference import marginal
from ltmkit.model import (
    CategoricalDataset,
    LatentTreeModel,
    Variable,
    forward_sample,
    latent_var,
    manifest_var,
    validate_model,
)

from conftest import make_naive_bayes


def one_node_model():
    v = manifest_var("a")
    return LatentTreeModel([v], [], "a", {"a": np.array([0.5, 0.5])})


class TestVariable:
    def test_cardinality_floor(self):
        with pytest.raises(ValueError, match="cardinality"):
            Variable("x", "x", 1, "manifest")

    def test_kind_checked(self):
        with pytest.raises(ValueError, match="kind"):
            Variable("x", "x", 2, "hidden")


class TestValidation:
    def test_degenerate_single_manifest_model_is_valid(self):
        assert validate_model(one_node_model()) == []

    def test_unnormalized_column_reported(self):
        m = make_naive_bayes([0.5, 0.5], {"s0": [0.8, 0.1]})
        bad = dict(m.tables)
        bad["s0"] = np.array([[0.2, 0.7], [0.9, 0.1]])
        broken = LatentTreeModel(m.variables.values(), m.edges, m.root, bad)
        report = validate_model(broken)
        assert any("column not normalized" in r for r in report)

    def test_cycle_reported(self):
        vs = [latent_var("A"), latent_var("B"), latent_var("C"), manifest_var("s")]
        edges = [("A", "B"), ("B", "C"), ("C", "A"), ("A", "s")]
        m = LatentTreeModel(vs, edges, "A", {})
        assert any("cycle" in r for r in validate_model(m))

    def test_manifest_must_be_leaf(self):
        vs = [latent_var("h"), manifest_var("a"), manifest_var("b")]
        m = LatentTreeModel(vs, [("h", "a"), ("a", "b")], "h", {})
        assert any("not a leaf" in r for r in validate_model(m))

    def test_latent_leaf_needs_manifest_neighbor(self):
        vs = [latent_var("h0"), latent_var("h1"), manifest_var("a")]
        m = LatentTreeModel(vs, [("h0", "h1"), ("h0", "a")], "h0", {})
        assert any("unidentifiable latent leaf" in r for r in validate_model(m))

    def test_latent_adjacent_to_single_manifest_is_legal(self):
        m = make_naive_bayes([0.4, 0.6], {"s0": [0.9, 0.2]})
        assert validate_model(m) == []

    def test_disconnected_reported(self):
        vs = [latent_var("h"), manifest_var("a"), manifest_var("b")]
        m = LatentTreeModel(vs, [("h", "a")], "h", {})
        assert any("not connected" in r for r in validate_model(m))

    def test_missing_and_misshapen_tables_reported(self):
        base = make_naive_bayes([0.5, 0.5], {"s0": [0.8, 0.1], "s1": [0.7, 0.2]})
        no_table = {k: v for k, v in base.tables.items() if k != "s1"}
        m = LatentTreeModel(base.variables.values(), base.edges, base.root, no_table)
        assert any("missing table: 's1'" in r for r in validate_model(m))
        bad_shape = dict(base.tables)
        bad_shape["s0"] = np.array([0.5, 0.5])
        m2 = LatentTreeModel(base.variables.values(), base.edges, base.root, bad_shape)
        assert any("shape mismatch" in r for r in validate_model(m2))

    def test_root_must_be_latent_when_latents_exist(self):
        vs = [latent_var("h"), manifest_var("a")]
        tables = {"a": np.array([0.5, 0.5]), "h": np.array([[0.7, 0.3], [0.2, 0.8]])}
        m = LatentTreeModel(vs, [("h", "a")], "a", tables)
        assert any("root not latent" in r for r in validate_model(m))

    def test_single_broken_invariant_yields_named_report(self):
        # mutate a valid model one invariant at a time
        base = make_naive_bayes([0.38, 0.62], {"s0": [0.77, 0.21], "s1": [0.69, 0.25]})
        assert validate_model(base) == []
        negative = dict(base.tables)
        negative["s0"] = np.array([[1.23, -0.23], [0.21, 0.79]])
        m = LatentTreeModel(base.variables.values(), base.edges, base.root, negative)
        assert any("outside [0, 1]" in r for r in validate_model(m))


class TestConstruction:
    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            LatentTreeModel([manifest_var("a"), manifest_var("a")], [], "a", {})

    def test_unknown_edge_endpoint_rejected(self):
        with pytest.raises(ValueError, match="unknown"):
            LatentTreeModel([manifest_var("a")], [("a", "b")], "a", {})

    def test_tables_are_frozen(self):
        m = one_node_model()
        with pytest.raises(ValueError):
            m.tables["a"][0] = 0.9


class TestDataset:
    def schema(self):
        return (manifest_var("a"), manifest_var("b"))

    def test_duplicates_consolidate(self):
        ds = CategoricalDataset(self.schema(), [[0, 1], [0, 1]])
        assert ds.n_cases == 1
        assert ds.counts.tolist() == [2]
        assert ds.total_n == 2

    def test_consolidation_equals_multiplicity(self):
        twice = CategoricalDataset(self.schema(), [[0, 1], [1, 1], [0, 1]])
        merged = CategoricalDataset(self.schema(), [[0, 1], [1, 1]], [2, 1])
        assert twice == merged

    def test_value_range_enforced(self):
        with pytest.raises(ValueError, match="out of range"):
            CategoricalDataset(self.schema(), [[0, 2]])

    def test_restrict_reconsolidates(self):
        ds = CategoricalDataset(self.schema(), [[0, 1], [0, 0]])
        sub = ds.restrict(["a"])
        assert sub.n_cases == 1
        assert sub.counts.tolist() == [2]

    def test_empty(self):
        ds = CategoricalDataset(self.schema(), [])
        assert ds.total_n == 0 and ds.n_cases == 0


class TestForwardSample:
    def test_deterministic_tables_repeat_one_case(self):
        m = make_naive_bayes([1.0, 0.0], {"s0": [1.0, 0.0], "s1": [0.0, 1.0]})
        ds = forward_sample(m, 25, seed=3)
        assert ds.n_cases == 1
        assert ds.counts.tolist() == [25]
        assert ds.values[0].tolist() == [1, 0]

    def test_zero_samples(self):
        m = make_naive_bayes([0.5, 0.5], {"s0": [0.8, 0.1]})
        ds = forward_sample(m, 0, seed=1)
        assert ds.total_n == 0

    def test_seed_determinism(self):
        m = make_naive_bayes([0.38, 0.62], {"s0": [0.77, 0.21], "s1": [0.69, 0.25]})
        a = forward_sample(m, 500, seed=11)
        b = forward_sample(m, 500, seed=11)
        assert a == b
        c = forward_sample(m, 500, seed=12)
        assert a != c or a.values.shape == c.values.shape  # different draw allowed

    def test_empirical_frequency_matches_exact_marginal(self):
        m = make_naive_bayes([0.38, 0.62], {"s0": [0.77, 0.21]})
        target = marginal(m, "s0")[1]
        assert target == pytest.approx(0.4228, abs=1e-12)
        n = 10000
        ds = forward_sample(m, n, seed=7)
        freq = float(np.dot(ds.counts, ds.column("s0"))) / n
        bound = 3 * np.sqrt(target * (1 - target) / n)
        assert abs(freq - target) <= bound

    def test_invalid_model_rejected(self):
        m = make_naive_bayes([0.5, 0.5], {"s0": [0.8, 0.1]})
        broken = LatentTreeModel(m.variables.values(), m.edges, m.root,
                                 {**m.tables, "s0": np.array([[0.5, 0.4], [0.2, 0.8]])})
        with pytest.raises(ValueError, match="invalid model"):
            forward_sample(broken, 5, seed=0)
