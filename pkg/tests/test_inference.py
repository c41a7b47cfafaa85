import numpy as np
import pytest

from ltmkit.inference import (
    brute_force_log_likelihood,
    brute_force_pairwise_marginal,
    brute_force_posterior,
    log_likelihood,
    map_state,
    marginal,
    pairwise_marginal,
    posterior,
    reroot,
)
from ltmkit.model import CategoricalDataset, forward_sample, manifest_var, LatentTreeModel

from conftest import make_naive_bayes, random_tree_model


def single_binary_model():
    v = manifest_var("a")
    return LatentTreeModel([v], [], "a", {"a": np.array([0.5, 0.5])})


def case_dataset(model, rows):
    ids = sorted(model.manifest_ids)
    schema = tuple(model.var(v) for v in ids)
    return CategoricalDataset(schema, rows)


class TestLogLikelihood:
    def test_single_variable(self):
        ds = case_dataset(single_binary_model(), [[1]])
        assert log_likelihood(single_binary_model(), ds) == pytest.approx(np.log(0.5))

    def test_multiplicity_scales_linearly(self):
        m = make_naive_bayes([0.38, 0.62], {"s0": [0.77, 0.21], "s1": [0.69, 0.25]})
        one = case_dataset(m, [[1, 0]])
        many = CategoricalDataset(one.schema, [[1, 0]], [7])
        assert log_likelihood(m, many) == pytest.approx(7 * log_likelihood(m, one))

    def test_zero_probability_case_gives_neg_inf(self):
        m = make_naive_bayes([1.0, 0.0], {"s0": [1.0, 0.0]})
        ds = case_dataset(m, [[0]])
        assert log_likelihood(m, ds) == -np.inf

    def test_underflow_scale_many_variables(self):
        # 96 symptoms at p=0.5: case probability 2^-96 underflows naive products
        probs = {f"s{i:02d}": [0.5, 0.5] for i in range(96)}
        m = make_naive_bayes([0.5, 0.5], probs)
        ds = case_dataset(m, [[i % 2 for i in range(96)]])
        assert log_likelihood(m, ds) == pytest.approx(96 * np.log(0.5), abs=1e-6)


class TestPosterior:
    def test_evidence_independent_target_keeps_prior(self):
        m = make_naive_bayes([0.3, 0.7], {"s0": [0.6, 0.6], "s1": [0.2, 0.2]})
        post = posterior(m, "z", {"s0": 1, "s1": 0})
        assert post == pytest.approx([0.3, 0.7], abs=1e-12)

    def test_hand_bayes_single_symptom(self):
        m = make_naive_bayes([0.38, 0.62], {"s0": [0.77, 0.21]})
        post = posterior(m, "z", {"s0": 1})
        expected = 0.38 * 0.77 / (0.38 * 0.77 + 0.62 * 0.21)
        assert post[0] == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(0.692, abs=5e-4)

    def test_map_state_from_posterior(self):
        m = make_naive_bayes([0.38, 0.62], {"s0": [0.77, 0.21]})
        assert map_state(m, "z", {"s0": 1}) == 0

    def test_map_tie_breaks_low(self):
        m = make_naive_bayes([0.5, 0.5], {"s0": [0.4, 0.4]})
        assert map_state(m, "z", {"s0": 1}) == 0

    def test_deterministic_coupling(self):
        m = make_naive_bayes([0.5, 0.5], {"s0": [1.0, 0.0]})
        assert map_state(m, "z", {"s0": 0}) == 1
        assert map_state(m, "z", {"s0": 1}) == 0

    def test_incomplete_case_rejected(self):
        m = make_naive_bayes([0.5, 0.5], {"s0": [0.8, 0.1], "s1": [0.7, 0.2]})
        with pytest.raises(ValueError, match="missing"):
            posterior(m, "z", {"s0": 1})

    def test_unknown_target_rejected(self):
        m = make_naive_bayes([0.5, 0.5], {"s0": [0.8, 0.1]})
        with pytest.raises(KeyError):
            posterior(m, "nope", {"s0": 1})

    def test_normalization(self, rng):
        for _ in range(20):
            m = random_tree_model(rng, n_vars=7, binary=False)
            ds = forward_sample(m, 5, seed=int(rng.integers(0, 2**31)))
            for i in range(ds.n_cases):
                for target in m.latent_ids:
                    post = posterior(m, target, ds.case_mapping(i))
                    assert post.sum() == pytest.approx(1.0, abs=1e-9)


class TestPairwiseMarginal:
    def test_same_variable_diagonal(self):
        m = make_naive_bayes([0.38, 0.62], {"s0": [0.77, 0.21]})
        t = pairwise_marginal(m, "s0", "s0")
        marg = marginal(m, "s0")
        assert np.allclose(t, np.diag(marg), atol=1e-12)

    def test_independent_pair_factorizes(self):
        # identical conditional rows cut the dependence through the latent
        m = make_naive_bayes([0.5, 0.5], {"s0": [0.7, 0.7], "s1": [0.2, 0.2]})
        t = pairwise_marginal(m, "s0", "s1")
        pa, pb = marginal(m, "s0"), marginal(m, "s1")
        assert np.allclose(t, np.outer(pa, pb), atol=1e-12)

    def test_entries_sum_to_one(self, rng):
        m = random_tree_model(rng, n_vars=8, binary=False)
        ids = list(m.variables)
        for a in ids[:4]:
            for b in ids[-4:]:
                assert pairwise_marginal(m, a, b).sum() == pytest.approx(1.0, abs=1e-9)


class TestOracleEquivalence:
    def test_matches_enumeration_on_random_models(self, rng):
        for trial in range(40):
            m = random_tree_model(rng, n_vars=int(rng.integers(4, 9)), binary=False)
            ds = forward_sample(m, 12, seed=trial)
            assert log_likelihood(m, ds) == pytest.approx(
                brute_force_log_likelihood(m, ds), abs=1e-9)
            case = ds.case_mapping(0)
            for target in m.latent_ids:
                a = posterior(m, target, case)
                b = brute_force_posterior(m, target, case)
                assert np.allclose(a, b, atol=1e-9)
            ids = list(m.variables)
            va = ids[int(rng.integers(0, len(ids)))]
            vb = ids[int(rng.integers(0, len(ids)))]
            assert np.allclose(pairwise_marginal(m, va, vb),
                               brute_force_pairwise_marginal(m, va, vb), atol=1e-9)

    def test_single_variable_brute_force_is_lookup(self):
        m = single_binary_model()
        ds = case_dataset(m, [[1]])
        assert brute_force_log_likelihood(m, ds) == pytest.approx(np.log(0.5))

    def test_deterministic_link_reduces_to_manifest_marginal(self):
        m = make_naive_bayes([0.3, 0.7], {"s0": [1.0, 0.0]})
        ds = case_dataset(m, [[1], [0]])
        expected = np.log(0.3) + np.log(0.7)
        assert brute_force_log_likelihood(m, ds) == pytest.approx(expected)
        assert log_likelihood(m, ds) == pytest.approx(expected)


class TestReroot:
    def test_likelihood_invariant_under_any_root(self, rng):
        for _ in range(15):
            m = random_tree_model(rng, n_vars=7, binary=False)
            ds = forward_sample(m, 20, seed=int(rng.integers(0, 2**31)))
            base = log_likelihood(m, ds)
            for new_root in m.variables:
                if m.var(new_root).kind != "latent":
                    continue
                rr = reroot(m, new_root)
                assert log_likelihood(rr, ds) == pytest.approx(base, abs=1e-9)

    def test_joint_preserved_exactly(self, rng):
        m = random_tree_model(rng, n_vars=6, binary=False)
        lat = [v for v in m.latent_ids if v != m.root]
        for target in lat:
            rr = reroot(m, target)
            for a in m.variables:
                for b in m.variables:
                    assert np.allclose(pairwise_marginal(m, a, b),
                                       pairwise_marginal(rr, a, b), atol=1e-10)
