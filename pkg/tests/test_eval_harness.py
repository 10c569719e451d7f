import pytest

from meme_ed import embed as emb
from meme_ed import evaluation as ev
from meme_ed import ingest as ing
from meme_ed import model as mdl
from meme_ed.modalities import CANONICAL_ORDER, Modality

from test_training import make_corpus, train_once


@pytest.fixture(scope="module")
def trained():
    ds, notes = make_corpus(240, data_seed=17)
    result, cohort, sp, store = train_once(ds, notes)
    test_ids = [v for v in cohort.visit_ids() if v in sp.test]
    return result, cohort, sp, store, test_ids


class TestEvaluateModel:
    def test_disposition_report_structure(self, trained):
        result, cohort, sp, store, test_ids = trained
        reports = ev.evaluate_model(
            result.params, cohort, test_ids, store, ing.TaskKind.DISPOSITION,
            n_boot=100, seed=0,
        )
        assert set(reports) == {"disposition"}
        assert set(reports["disposition"]) == set(ev.METRIC_NAMES)
        for report in reports["disposition"].values():
            assert report.ci_low <= report.ci_high
            assert report.n_resamples == 100

    def test_reports_deterministic(self, trained):
        result, cohort, sp, store, test_ids = trained
        kwargs = dict(n_boot=50, seed=4)
        a = ev.evaluate_model(
            result.params, cohort, test_ids, store, ing.TaskKind.DISPOSITION, **kwargs
        )
        b = ev.evaluate_model(
            result.params, cohort, test_ids, store, ing.TaskKind.DISPOSITION, **kwargs
        )
        assert a == b


class TestAblate:
    def test_row_cardinality_and_signal_ordering(self):
        """Signal planted only in triage: triage-only must beat codes-only,
        and six singletons plus the full set give seven rows."""
        ds, notes = make_corpus(
            300, data_seed=31,
            signal=ing.SignalSpec(modalities=(Modality.TRIAGE,), strength=0.95),
        )
        store = emb.build_store(notes, emb.HashEmbedder(d=128, seed=0))
        sp = ing.split(ds, (0.8, 0.1, 0.1), seed=0)
        mc = mdl.ModelConfig(
            n_modalities=6, d=128, d_attn=16, d_hidden=32, n_labels=2,
            dropout_rate=0.3, seed=0,
        )
        tc = mdl.TrainConfig(batch_size=32, lr=1e-2, max_epochs=10, patience=10, seed=0)
        subsets = [(m,) for m in CANONICAL_ORDER] + [tuple(CANONICAL_ORDER)]
        results = ev.ablate(ds, store, subsets, mc, tc, sp, n_boot=50, seed=0)
        assert len(results) == 7
        aurocs = {r.name(): r.reports["disposition"]["auroc"].point for r in results}
        assert aurocs["triage"] > aurocs["codes"]

    def test_empty_subset_rejected(self, trained):
        result, cohort, sp, store, _ = trained
        mc = result.params.config
        with pytest.raises(ing.types.DataError):
            ev.ablate(cohort, store, [()], mc, mdl.TrainConfig(), sp)


class TestShiftReport:
    def _dataset(self, rows_by_visit):
        visits = []
        for i, rows in enumerate(rows_by_visit):
            visits.append(
                ing.VisitRecord(
                    visit_id=f"v{i}",
                    modality_rows={Modality.CODES: rows},
                    labels=ing.LabelSet(disposition=0),
                )
            )
        return ing.Dataset(visits=visits)

    def test_identical_datasets(self):
        ds = self._dataset([[{"icd_title": "a"}, {"icd_title": "b"}]])
        report = ev.shift_report(ds, ds)
        (cat,) = report.categorical
        assert (cat.a_size, cat.b_size, cat.intersection) == (2, 2, 2)

    def test_disjoint_vocabularies(self):
        a = self._dataset([[{"icd_title": "x"}]])
        b = self._dataset([[{"icd_title": "y"}]])
        (cat,) = ev.shift_report(a, b).categorical
        assert cat.intersection == 0

    def test_set_arithmetic(self):
        a = self._dataset([[{"icd_title": "a"}, {"icd_title": "b"}, {"icd_title": "c"}]])
        b = self._dataset([[{"icd_title": "b"}, {"icd_title": "c"}, {"icd_title": "d"}]])
        (cat,) = ev.shift_report(a, b).categorical
        assert (cat.a_size, cat.b_size, cat.intersection) == (3, 3, 2)
        assert cat.intersection <= min(cat.a_size, cat.b_size)

    def test_numeric_five_number_summary(self):
        a = self._dataset([[{"icd_code": "1"}, {"icd_code": "2"}, {"icd_code": "3"},
                            {"icd_code": "4"}, {"icd_code": "5"}]])
        b = self._dataset([[{"icd_code": "10"}, {"icd_code": "20"}]])
        report = ev.shift_report(a, b)
        (num,) = report.numeric
        assert num.a.minimum == 1.0 and num.a.maximum == 5.0 and num.a.median == 3.0
        assert num.b.minimum == 10.0 and num.b.maximum == 20.0

    def test_mixed_values_are_categorical(self):
        a = self._dataset([[{"icd_code": "1"}, {"icd_code": "x9"}]])
        b = self._dataset([[{"icd_code": "2"}]])
        report = ev.shift_report(a, b)
        assert not report.numeric
        (cat,) = report.categorical
        assert cat.a_size == 2

    def test_synthetic_shift_smoke(self):
        a = ing.synth_generate(ing.SynthConfig(n_visits=30), seed=1)
        b = ing.synth_generate(ing.SynthConfig(n_visits=30), seed=2)
        report = ev.shift_report(a, b)
        assert report.categorical and report.numeric
        for cat in report.categorical:
            assert cat.intersection <= min(cat.a_size, cat.b_size)


class TestReportWriters:
    def test_metrics_csv_and_json(self, trained, tmp_path):
        result, cohort, sp, store, test_ids = trained
        reports = ev.evaluate_model(
            result.params, cohort, test_ids, store, ing.TaskKind.DISPOSITION,
            n_boot=50, seed=0,
        )
        csv_path = tmp_path / "metrics.csv"
        json_path = tmp_path / "metrics.json"
        ev.write_metrics_csv(reports, csv_path, row_name="meme")
        ev.write_metrics_json(reports, json_path, row_name="meme")
        header = csv_path.read_text().splitlines()[0]
        assert "ci_low" in header and "ci_high" in header
        assert "pretty_ci" in json_path.read_text()

    def test_ablation_table(self, tmp_path):
        ds, notes = make_corpus(120, data_seed=2)
        store = emb.build_store(notes, emb.HashEmbedder(d=64, seed=0))
        sp = ing.split(ds, (0.8, 0.1, 0.1), seed=0)
        mc = mdl.ModelConfig(n_modalities=6, d=64, d_attn=8, d_hidden=16, n_labels=2, seed=0)
        tc = mdl.TrainConfig(batch_size=32, lr=1e-2, max_epochs=2, patience=5, seed=0)
        results = ev.ablate(
            ds, store, [(Modality.TRIAGE,), tuple(CANONICAL_ORDER)], mc, tc, sp,
            n_boot=20, seed=0,
        )
        long_path = tmp_path / "ablation.csv"
        table_path = tmp_path / "table.csv"
        ev.write_ablation_csv(results, long_path)
        ev.write_ablation_table_csv(results, table_path)
        table = table_path.read_text().splitlines()
        assert table[0].startswith("subset,")
        assert "±" in table[1]

    def test_shift_writers(self, tmp_path):
        a = ing.synth_generate(ing.SynthConfig(n_visits=10), seed=1)
        b = ing.synth_generate(ing.SynthConfig(n_visits=10), seed=2)
        report = ev.shift_report(a, b)
        ev.write_shift_csv(report, tmp_path / "shift.csv")
        ev.write_shift_json(report, tmp_path / "shift.json")
        assert (tmp_path / "shift.csv").read_text().startswith("kind,modality,field")
