import numpy as np
import pytest

from ltmkit.model import LatentTreeModel, latent_var, manifest_var
from ltmkit.patterns import (
    coverage_prefix,
    extract_patterns,
    mutual_information,
)

from conftest import make_naive_bayes


def mi_2x2(joint):
    joint = np.asarray(joint, dtype=float)
    pa, pb = joint.sum(axis=1), joint.sum(axis=0)
    total = 0.0
    for i in range(2):
        for j in range(2):
            if joint[i, j] > 0:
                total += joint[i, j] * np.log2(joint[i, j] / (pa[i] * pb[j]))
    return total


class TestMutualInformation:
    def test_independent_pair_is_zero(self):
        m = make_naive_bayes([0.5, 0.5], {"s0": [0.7, 0.7], "s1": [0.2, 0.2]})
        assert mutual_information(m, "s0", "s1") == pytest.approx(0.0, abs=1e-12)

    def test_perfect_copy_of_uniform_bit(self):
        m = make_naive_bayes([0.5, 0.5], {"s0": [0.0, 1.0]})
        assert mutual_information(m, "z", "s0") == pytest.approx(1.0, abs=1e-12)

    def test_self_information_is_entropy(self):
        m = make_naive_bayes([0.38, 0.62], {"s0": [0.77, 0.21]})
        h = -(0.38 * np.log2(0.38) + 0.62 * np.log2(0.62))
        assert mutual_information(m, "z", "z") == pytest.approx(h, abs=1e-12)

    def test_against_direct_2x2_computation(self):
        m = make_naive_bayes([0.38, 0.62], {"s0": [0.77, 0.21]})
        joint = [[0.38 * 0.23, 0.38 * 0.77], [0.62 * 0.79, 0.62 * 0.21]]
        # orient: rows z, cols s; P(s=1|z=0)=0.77
        expected = mi_2x2(joint)
        assert mutual_information(m, "z", "s0") == pytest.approx(expected, abs=1e-12)


class TestCoveragePrefix:
    def test_monotone_zero_to_one(self):
        w = [5.0, 3.0, 1.0, 1.0]
        cum = np.cumsum(w) / np.sum(w)
        assert cum[0] > 0 and cum[-1] == pytest.approx(1.0)
        assert all(b >= a for a, b in zip(cum, cum[1:]))

    def test_nine_equal_weights_cutoff_95(self):
        # k/9 >= 0.95 first at k = 9
        assert coverage_prefix([1.0] * 9, 0.95) == 9

    def test_exact_boundary_inclusive(self):
        assert coverage_prefix([1.0, 1.0], 0.5) == 1
        assert coverage_prefix([3.0, 1.0], 0.75) == 1
        assert coverage_prefix([3.0, 1.0], 0.76) == 2

    def test_full_coverage_keeps_all(self):
        assert coverage_prefix([2.0, 1.0, 1.0], 1.0) == 3


class TestExtractPatterns:
    def test_co_occurrence_with_tied_ids(self):
        m = make_naive_bayes([0.5, 0.5], {"s1": [0.8, 0.05], "s2": [0.8, 0.05]})
        (p,) = extract_patterns(m, coverage=1.0)
        assert p.kind == "co-occurrence"
        assert p.symptoms == ("s1", "s2")  # equal MI, tie broken by id
        assert p.state_profile[0]["s1"] == pytest.approx(0.8)

    def test_mutual_exclusion_two_groups(self):
        m = make_naive_bayes([0.5, 0.5], {"s1": [0.7, 0.02], "s2": [0.03, 0.6]})
        (p,) = extract_patterns(m, coverage=1.0)
        assert p.kind == "mutual-exclusion"
        assert len(p.groups) == 2
        members = {g.label: set(g.symptoms) for g in p.groups}
        assert members == {"z-1": {"s1"}, "z-2": {"s2"}}

    def test_singleton_when_one_symptom_dominates(self):
        # z couples strongly to s0 only; other symptoms carry ~no information
        m = make_naive_bayes([0.5, 0.5], {"s0": [0.97, 0.03],
                                          "s1": [0.5, 0.5], "s2": [0.5, 0.5]})
        (p,) = extract_patterns(m, coverage=0.95)
        assert p.kind == "singleton"
        assert p.symptoms == ("s0",)

    def test_one_pattern_per_latent_nonempty(self):
        from ltmkit.em import EMConfig, em_fit
        from ltmkit.model import forward_sample
        lats = [latent_var("z0"), latent_var("z1")]
        mans = [manifest_var(s) for s in ("a", "b", "c", "d")]
        edges = [("z0", "z1"), ("z0", "a"), ("z0", "b"), ("z1", "c"), ("z1", "d")]
        skeleton = LatentTreeModel(lats + mans, edges, "z0", {})
        truth = em_fit(skeleton, forward_sample(
            make_naive_bayes([0.5, 0.5], {"a": [0.9, 0.1], "b": [0.8, 0.2],
                                          "c": [0.2, 0.9], "d": [0.3, 0.8]}), 500, 1),
            EMConfig(restarts=2, seed=0)).model
        patterns = extract_patterns(truth, coverage=0.9)
        assert [p.latent_id for p in patterns] == ["z0", "z1"]
        for p in patterns:
            assert len(p.symptoms) >= 1

    def test_mi_ordering_descending(self):
        m = make_naive_bayes([0.5, 0.5], {"weak": [0.6, 0.4], "strong": [0.95, 0.05],
                                          "mid": [0.8, 0.2]})
        (p,) = extract_patterns(m, coverage=1.0)
        assert p.symptoms == ("strong", "mid", "weak")
        mis = [p.mi_table[s] for s in p.symptoms]
        assert mis == sorted(mis, reverse=True)

    def test_pattern_state_elevates_all_listed(self):
        m = make_naive_bayes([0.4, 0.6], {"s1": [0.8, 0.1], "s2": [0.7, 0.2],
                                          "s3": [0.9, 0.3]})
        (p,) = extract_patterns(m, coverage=1.0)
        assert p.kind == "co-occurrence"
        # designated pattern state: the one elevating every listed symptom
        prof = p.state_profile
        elevations = [all(prof[k][s] > max(prof[o][s] for o in prof if o != k)
                          for s in p.symptoms) for k in prof]
        assert any(elevations)

    def test_three_state_mutual_exclusion(self):
        prior = [0.3, 0.3, 0.4]
        m = make_naive_bayes(prior, {"s1": [0.8, 0.05, 0.05],
                                     "s2": [0.05, 0.75, 0.05],
                                     "s3": [0.05, 0.05, 0.7]})
        (p,) = extract_patterns(m, coverage=1.0)
        assert p.kind == "mutual-exclusion"
        assert len(p.groups) == 3

    def test_invalid_coverage_rejected(self):
        m = make_naive_bayes([0.5, 0.5], {"s0": [0.8, 0.1]})
        with pytest.raises(ValueError, match="coverage"):
            extract_patterns(m, coverage=0.0)
