import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meme_ed import evaluation as ev
from meme_ed.errors import DataError
from oracles import auprc_bruteforce, auroc_bruteforce, f1_bruteforce


class TestF1:
    def test_perfect(self):
        assert ev.f1([0.9, 0.9, 0.1], [1, 1, 0]) == 1.0

    def test_hand_counted(self):
        # 6 samples: TP=2, FP=1, FN=1 -> 2*2 / (2*2 + 1 + 1) = 0.666...
        scores = [0.9, 0.8, 0.7, 0.2, 0.1, 0.1]
        labels = [1, 1, 0, 1, 0, 0]
        assert ev.f1(scores, labels) == pytest.approx(2 * 2 / (2 * 2 + 1 + 1))

    def test_no_positive_predictions(self):
        assert ev.f1([0.1, 0.2], [1, 1]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ev.LengthMismatch):
            ev.f1([0.5], [1, 0])


class TestAuroc:
    def test_perfectly_separated(self):
        assert ev.auroc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0

    def test_hand_enumerated(self):
        # pairs: (0.35 vs 0.1) ok, (0.35 vs 0.4) wrong, (0.8 vs both) ok -> 3/4
        assert ev.auroc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == pytest.approx(0.75)

    def test_all_ties(self):
        assert ev.auroc([0.5, 0.5, 0.5, 0.5], [0, 1, 0, 1]) == 0.5

    def test_single_class(self):
        with pytest.raises(ev.SingleClassError):
            ev.auroc([0.5, 0.6], [1, 1])


class TestAuprc:
    def test_all_positive(self):
        assert ev.auprc([0.3, 0.9, 0.5], [1, 1, 1]) == 1.0

    def test_perfect_ranking(self):
        assert ev.auprc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0

    def test_hand_computed(self):
        # ranks: 0.9(+) p=1/1, 0.8(-), 0.7(+) p=2/3 -> (1 + 2/3)/2
        assert ev.auprc([0.9, 0.8, 0.7], [1, 0, 1]) == pytest.approx((1 + 2 / 3) / 2)

    def test_no_positives(self):
        with pytest.raises(ev.NoPositives):
            ev.auprc([0.5], [0])


class TestOracleEquivalence:
    """Randomized small instances against exhaustive brute-force oracles."""

    def test_many_random_cases(self):
        rng = np.random.default_rng(2024)
        checked_roc = checked_pr = 0
        for _ in range(3000):
            n = int(rng.integers(2, 13))
            labels = rng.integers(0, 2, size=n)
            # quantized scores force plenty of ties
            scores = np.round(rng.random(n), 1)
            if labels.any() and not labels.all():
                assert abs(ev.auroc(scores, labels) - auroc_bruteforce(scores, labels)) < 1e-12
                checked_roc += 1
            if labels.any():
                assert abs(ev.auprc(scores, labels) - auprc_bruteforce(scores, labels)) < 1e-12
                checked_pr += 1
            assert ev.f1(scores, labels) == pytest.approx(f1_bruteforce(scores, labels))
        assert checked_roc > 1000 and checked_pr > 1000

    @settings(max_examples=200, deadline=None)
    @given(
        labels=st.lists(st.integers(0, 1), min_size=2, max_size=12),
        seed=st.integers(0, 10_000),
    )
    def test_monotone_invariance(self, labels, seed):
        """Strictly increasing score transforms leave AUROC/AUPRC unchanged."""
        labels = np.array(labels)
        rng = np.random.default_rng(seed)
        scores = np.round(rng.random(len(labels)), 2)
        transformed = np.exp(3.0 * scores) + 1.0  # strictly increasing
        if labels.any() and not labels.all():
            assert ev.auroc(transformed, labels) == pytest.approx(
                ev.auroc(scores, labels), abs=1e-12
            )
        if labels.any():
            assert ev.auprc(transformed, labels) == pytest.approx(
                ev.auprc(scores, labels), abs=1e-12
            )

    def test_auroc_complement_symmetry(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            n = int(rng.integers(2, 13))
            labels = rng.integers(0, 2, size=n)
            if not labels.any() or labels.all():
                continue
            scores = np.round(rng.random(n), 1)
            assert ev.auroc(-scores, 1 - labels) == pytest.approx(
                ev.auroc(scores, labels), abs=1e-12
            )


class TestBootstrap:
    def test_degenerate_width_zero(self):
        scores = np.array([0.9, 0.9, 0.1, 0.1] * 10)
        labels = np.array([1, 1, 0, 0] * 10)
        report = ev.bootstrap_ci(ev.auroc, scores, labels, n=200, seed=0)
        assert report.ci_low == report.ci_high == report.point == 1.0

    def test_deterministic(self):
        rng = np.random.default_rng(1)
        scores = rng.random(80)
        labels = rng.integers(0, 2, size=80)
        a = ev.bootstrap_ci(ev.auroc, scores, labels, n=300, seed=9)
        b = ev.bootstrap_ci(ev.auroc, scores, labels, n=300, seed=9)
        assert a == b
        c = ev.bootstrap_ci(ev.auroc, scores, labels, n=300, seed=10)
        assert (c.ci_low, c.ci_high) != (a.ci_low, a.ci_high)

    def test_point_within_ci_on_mixed_fixture(self):
        rng = np.random.default_rng(42)
        n = 500
        labels = rng.integers(0, 2, size=n)
        scores = np.clip(labels * 0.3 + rng.normal(0.4, 0.25, size=n), 0, 1)
        report = ev.bootstrap_ci(ev.auroc, scores, labels, n=1000, level=0.95, seed=7)
        assert report.point_within_ci
        assert report.n_skipped == 0
        assert report.resample_std > 0

    def test_skip_counter(self):
        # tiny sample with a lone positive: many resamples go single-class
        scores = np.array([0.9, 0.2, 0.3])
        labels = np.array([1, 0, 0])
        report = ev.bootstrap_ci(ev.auroc, scores, labels, n=200, seed=3)
        assert report.n_skipped > 0
        assert report.n_resamples == 200

    def test_all_degenerate(self):
        with pytest.raises(ev.AllResamplesDegenerate):
            ev.bootstrap_ci(ev.f1, np.array([0.5, 0.6]), np.array([1, 1]), n=10, seed=0)

    def test_invalid_params(self):
        with pytest.raises(DataError):
            ev.bootstrap_ci(ev.f1, np.array([0.5]), np.array([1]), n=1)
        with pytest.raises(DataError):
            ev.bootstrap_ci(ev.f1, np.array([0.5]), np.array([1]), n=10, level=1.5)
