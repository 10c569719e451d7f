"""Acceptance suite: one test per acceptance criterion, each printing a
PASS/FAIL line (run with `pytest -s tests/test_acceptance.py -v`).

Desk-scale checks are property-based against planted-signal synthetic data;
the credentialed-extract checks are data-gated and skip unless MIMIC_ED_DIR
points at a prepared extract (see README).
"""

import csv
import os
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

from meme_ed import embed as emb
from meme_ed import evaluation as ev
from meme_ed import ingest as ing
from meme_ed import model as mdl
from meme_ed import pseudonote as pn
from meme_ed.modalities import CANONICAL_ORDER, Modality

from oracles import (
    auprc_bruteforce,
    auroc_bruteforce,
    finite_difference_grads,
    max_relative_error,
)
from test_cli import run_pipeline


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"[ACCEPTANCE] {name}: FAIL")
        raise
    print(f"[ACCEPTANCE] {name}: PASS")


# Desk-scale training recipe used by the learnability criteria. The headline
# optimizer defaults (lr 5e-5, batch 64) target full-size encoder embeddings;
# at 1k visits with 256-d hash embeddings that rate cannot move the head far
# enough in 10 epochs, so learnability checks pin a faster rate.
TRAIN = dict(batch_size=64, lr=3e-3, max_epochs=10, patience=10, seed=0)
MODEL = dict(d=256, d_attn=32, d_hidden=64, dropout_rate=0.3, seed=0)


def _corpus(n, data_seed, signal_modalities, row_counts=None):
    cfg = ing.SynthConfig(
        n_visits=n,
        signal=ing.SignalSpec(modalities=signal_modalities, strength=0.95),
        row_counts=row_counts or {},
    )
    ds = ing.synth_generate(cfg, seed=data_seed)
    templates = pn.default_templates()
    notes = []
    for visit in ds.visits:
        notes.extend(pn.render_all(visit, templates))
    return ds, notes


def _train_and_test_auroc(ds, notes, mode, seed=0):
    store = emb.build_store(notes, emb.HashEmbedder(d=MODEL["d"], seed=seed), mode=mode)
    sp = ing.split(ds, (0.8, 0.1, 0.1), seed=seed)
    mc = mdl.ModelConfig(n_modalities=1 if mode == "msem" else 6, n_labels=2, **MODEL)
    result = mdl.train(ds, sp, store, mc, mdl.TrainConfig(**TRAIN), mode=mode)
    test_ids = [v for v in ds.visit_ids() if v in sp.test]
    x, y = mdl.assemble_inputs(ds, test_ids, store, ing.TaskKind.DISPOSITION, mode)
    probs = mdl.predict_proba(result.params, x, "disposition")
    return ev.auroc(probs[:, 1], y), len(result.history), store, sp


class TestAcceptance:
    def test_gradient_check(self):
        """Analytic vs central finite-difference gradients: 5 seeds, config
        (M=6, d=8, d_attn=4, d_hidden=8, n_labels=3), eps 1e-5, max relative
        error < 1e-4 at 64-bit, in under 10 seconds."""
        with criterion("gradient-check"):
            start = time.monotonic()
            worst = 0.0
            for seed in range(5):
                config = mdl.ModelConfig(
                    n_modalities=6, d=8, d_attn=4, d_hidden=8, n_labels=3,
                    dropout_rate=0.0, seed=seed,
                )
                rng = np.random.default_rng(seed)
                params = mdl.init_params(config)
                batch = rng.normal(size=(4, config.input_dim))
                labels = rng.integers(0, 2, size=(4, 3)).astype(float)
                _, grads, _ = mdl.loss_and_grads(batch, labels, params, "bce")
                numeric = finite_difference_grads(batch, labels, params, "bce", eps=1e-5)
                for name in mdl.TENSOR_ORDER:
                    worst = max(
                        worst, max_relative_error(getattr(grads, name), numeric[name])
                    )
            elapsed = time.monotonic() - start
            print(f"  max relative error {worst:.3e} over 5 seeds in {elapsed:.2f}s")
            assert worst < 1e-4
            assert elapsed < 10.0

    def test_attention_invariants(self):
        """Attention rows sum to 1 +- 1e-9 on 1,000 random inputs; the M=1
        case reproduces the closed-form single-token output exactly."""
        with criterion("attention-invariants"):
            config = mdl.ModelConfig(
                n_modalities=6, d=8, d_attn=4, d_hidden=8, n_labels=2, seed=0
            )
            params = mdl.init_params(config)
            rng = np.random.default_rng(0)
            batch = rng.normal(scale=3.0, size=(1000, config.input_dim))
            _, trace = mdl.forward(batch, params, training=False)
            max_dev = float(np.abs(trace.attention_weights.sum(axis=-1) - 1.0).max())
            print(f"  worst row-sum deviation {max_dev:.2e} over 1000 inputs")
            assert max_dev <= 1e-9

            single = mdl.ModelConfig(
                n_modalities=1, d=8, d_attn=4, d_hidden=8, n_labels=2, seed=1
            )
            sp = mdl.init_params(single)
            for i in range(100):
                x = np.random.default_rng(i).normal(size=8)
                out, weights = mdl.self_attention(x, sp)
                assert np.array_equal(weights, np.array([[1.0]]))
                assert np.array_equal(out, (x @ sp.w_v) @ sp.w_o)

    def test_metric_oracle_equivalence(self):
        """AUROC/AUPRC equal exhaustive brute-force oracles on >= 10,000
        random labelings of <= 12 samples, to 1e-12."""
        with criterion("metric-oracle-equivalence"):
            rng = np.random.default_rng(1234)
            n_roc = n_pr = 0
            worst = 0.0
            cases = 0
            while n_roc < 10_000 or n_pr < 10_000:
                cases += 1
                n = int(rng.integers(2, 13))
                labels = rng.integers(0, 2, size=n)
                scores = np.round(rng.random(n), 1)  # coarse grid forces ties
                if labels.any() and not labels.all():
                    delta = abs(ev.auroc(scores, labels) - auroc_bruteforce(scores, labels))
                    worst = max(worst, delta)
                    assert delta < 1e-12
                    n_roc += 1
                if labels.any():
                    delta = abs(ev.auprc(scores, labels) - auprc_bruteforce(scores, labels))
                    worst = max(worst, delta)
                    assert delta < 1e-12
                    n_pr += 1
            print(f"  {n_roc} AUROC + {n_pr} AUPRC cases, worst |delta| {worst:.2e}")

    def test_bootstrap_protocol(self):
        """n=1000 level-0.95 bootstrap is deterministic per seed; on a
        500-sample fixture the point estimate lies within the CI; the
        degenerate-resample skip counter is reported."""
        with criterion("bootstrap-protocol"):
            rng = np.random.default_rng(42)
            labels = rng.integers(0, 2, size=500)
            scores = np.clip(labels * 0.3 + rng.normal(0.4, 0.25, size=500), 0, 1)
            a = ev.bootstrap_ci(ev.auroc, scores, labels, n=1000, level=0.95, seed=7)
            b = ev.bootstrap_ci(ev.auroc, scores, labels, n=1000, level=0.95, seed=7)
            assert a == b
            assert a.n_resamples == 1000 and a.level == 0.95
            assert a.ci_low <= a.point <= a.ci_high
            print(
                f"  auroc {a.point:.4f} in [{a.ci_low:.4f}, {a.ci_high:.4f}], "
                f"skipped {a.n_skipped}/1000"
            )
            # the skip counter actually counts: a lone-positive fixture
            tiny = ev.bootstrap_ci(
                ev.auroc, np.array([0.9, 0.1, 0.2]), np.array([1, 0, 0]), n=1000, seed=0
            )
            assert tiny.n_skipped > 0
            assert tiny.n_skipped + 0 <= 1000

    def test_planted_signal_learning(self):
        """1,000 visits with signal in triage+codes: MEME test AUROC >= 0.95
        within 10 epochs. On the long-note variant (signal beyond token 512)
        MSEM trails MEME by at least 0.15 AUROC. Under 5 minutes, 1 core."""
        with criterion("planted-signal-learning"):
            start = time.monotonic()
            ds, notes = _corpus(1000, 21, (Modality.TRIAGE, Modality.CODES))
            meme_auroc, epochs, _, _ = _train_and_test_auroc(ds, notes, "meme")
            assert epochs <= 10
            assert meme_auroc >= 0.95

            long_ds, long_notes = _corpus(
                1000, 13, (Modality.CODES,),
                row_counts={
                    Modality.MEDRECON: (10, 14),
                    Modality.PYXIS: (10, 14),
                    Modality.VITALS: (8, 10),
                },
            )
            # mechanism check: the signal-bearing codes note starts past the
            # 512-token budget of every joined long-variant note
            templates = pn.default_templates()
            for visit in long_ds.visits:
                six = pn.render_all(visit, templates)
                before_codes = " ".join(n.text for n in six[:-1])
                assert len(emb.tokenize_approx(before_codes)) >= 512
            meme_long, _, _, _ = _train_and_test_auroc(long_ds, long_notes, "meme")
            msem_long, _, _, _ = _train_and_test_auroc(long_ds, long_notes, "msem")
            elapsed = time.monotonic() - start
            print(
                f"  meme {meme_auroc:.3f}; long-variant meme {meme_long:.3f} vs "
                f"msem {msem_long:.3f} (gap {meme_long - msem_long:.3f}) in {elapsed:.0f}s"
            )
            assert meme_long - msem_long >= 0.15
            assert elapsed < 300.0

    def test_ablation_shape(self):
        """Two-modality planted signal: the full six-modality model scores at
        least each singleton's AUROC - 0.02."""
        with criterion("ablation-shape"):
            ds, notes = _corpus(1000, 21, (Modality.TRIAGE, Modality.CODES))
            store = emb.build_store(notes, emb.HashEmbedder(d=MODEL["d"], seed=0))
            sp = ing.split(ds, (0.8, 0.1, 0.1), seed=0)
            mc = mdl.ModelConfig(n_modalities=6, n_labels=2, **MODEL)
            subsets = [(m,) for m in CANONICAL_ORDER] + [tuple(CANONICAL_ORDER)]
            results = ev.ablate(
                ds, store, subsets, mc, mdl.TrainConfig(**TRAIN), sp, n_boot=200, seed=0
            )
            aurocs = {r.name(): r.reports["disposition"]["auroc"].point for r in results}
            full = aurocs["+".join(m.value for m in CANONICAL_ORDER)]
            singles = {k: v for k, v in aurocs.items() if "+" not in k}
            print(
                "  full {:.3f}; singletons ".format(full)
                + ", ".join(f"{k}={v:.3f}" for k, v in singles.items())
            )
            for name, value in singles.items():
                assert full >= value - 0.02, f"full {full:.4f} < {name} {value:.4f} - 0.02"

    def test_golden_notes(self, reference_visit, golden_dir):
        """The six reference fixtures render byte-identically to the
        committed golden files (identifier-omission deviation documented in
        the fixture)."""
        with criterion("golden-notes"):
            templates = pn.default_templates()
            schema = ing.default_schema()
            for modality in CANONICAL_ORDER:
                note = pn.render_modality(reference_visit, modality, templates, schema)
                golden = (golden_dir / f"{modality.value}.txt").read_bytes()
                assert (note.text + "\n").encode("utf-8") == golden, modality.value
            print("  6/6 golden notes byte-identical")

    def test_end_to_end_determinism(self, tmp_path):
        """Two full pipeline runs with identical config and seed produce
        byte-identical metric CSVs."""
        with criterion("end-to-end-determinism"):
            a_dir = tmp_path / "a"
            b_dir = tmp_path / "b"
            a_dir.mkdir()
            b_dir.mkdir()
            a = run_pipeline(a_dir, seed=19, n=300, bootstrap=1000)
            b = run_pipeline(b_dir, seed=19, n=300, bootstrap=1000)
            assert a.read_bytes() == b.read_bytes()
            print(f"  {a.stat().st_size} identical bytes across runs")


MIMIC_DIR = os.environ.get("MIMIC_ED_DIR")


@pytest.mark.skipif(
    not MIMIC_DIR, reason="set MIMIC_ED_DIR to a prepared credentialed extract"
)
class TestMimicDataGated:
    """Credentialed-extract checks: cohort sizes and published prevalences."""

    @pytest.fixture(scope="class")
    def labeled(self):
        root = Path(MIMIC_DIR)
        paths = {m: root / f"{m.value}.csv" for m in CANONICAL_ORDER}
        dataset = ing.load_tables(paths, ing.default_schema())
        return ing.label_dataset(dataset)

    def test_cohort_sizes(self, labeled):
        with criterion("mimic-cohort-sizes"):
            assert len(labeled) == 400_019
            admitted = ing.filter_cohort(labeled, ing.TaskKind.DECOMPENSATION)
            assert len(admitted) == 158_010

    def test_prevalences(self, labeled):
        with criterion("mimic-prevalences"):
            admitted = ing.filter_cohort(labeled, ing.TaskKind.DECOMPENSATION)
            checks = [
                (labeled, ing.LabelKind.DISPOSITION, 0.395),
                (admitted, ing.LabelKind.DISCHARGE_HOME, 0.449),
                (admitted, ing.LabelKind.ICU, 0.197),
                (admitted, ing.LabelKind.MORTALITY, 0.029),
            ]
            for dataset, kind, expected in checks:
                assert abs(ing.prevalence(dataset, kind) - expected) <= 0.001, kind
