import csv
import json
from pathlib import Path

import pytest

from meme_ed.cli import main


def run_pipeline(workdir: Path, seed: int = 7, n: int = 120, bootstrap: int = 100) -> Path:
    """synth -> notes -> embed -> train -> eval; returns the metrics CSV path."""
    synth_cfg = workdir / "synth.json"
    synth_cfg.write_text(json.dumps({
        "n_visits": n,
        "signal": {"modalities": ["triage", "codes"], "strength": 0.95},
    }))
    dataset = workdir / "dataset.jsonl"
    notes = workdir / "notes.jsonl"
    store = workdir / "store.memb"
    ckpt = workdir / "model.ckpt"
    metrics = workdir / "metrics.csv"
    steps = [
        ["synth", "--synth-config", str(synth_cfg), "--seed", str(seed), "--out", str(dataset)],
        ["notes", "--dataset", str(dataset), "--out", str(notes)],
        ["embed", "--notes", str(notes), "--d", "128", "--seed", str(seed), "--out", str(store)],
        [
            "train", "--dataset", str(dataset), "--store", str(store),
            "--seed", str(seed), "--lr", "0.01", "--batch-size", "32",
            "--epochs", "5", "--patience", "5", "--out", str(ckpt),
            "--history", str(workdir / "history.csv"),
        ],
        [
            "eval", "--dataset", str(dataset), "--store", str(store),
            "--ckpt", str(ckpt), "--seed", str(seed),
            "--bootstrap", str(bootstrap), "--level", "0.95",
            "--out", str(metrics), "--json", str(workdir / "metrics.json"),
        ],
    ]
    for argv in steps:
        code = main(argv)
        assert code == 0, f"step {argv[0]} exited {code}"
    return metrics


class TestPipeline:
    def test_smoke_pipeline_emits_metric_csv(self, tmp_path, capsys):
        metrics = run_pipeline(tmp_path)
        rows = list(csv.DictReader(metrics.open()))
        assert {r["metric"] for r in rows} == {"f1", "auroc", "auprc"}
        for row in rows:
            assert float(row["ci_low"]) <= float(row["ci_high"])
            assert row["n_resamples"] == "100"
        out = capsys.readouterr().out
        assert "wrote" in out

    def test_missing_store_exits_2_and_names_path(self, tmp_path, capsys):
        synth = tmp_path / "synth.json"
        synth.write_text(json.dumps({"n_visits": 20}))
        dataset = tmp_path / "dataset.jsonl"
        assert main(["synth", "--synth-config", str(synth), "--out", str(dataset)]) == 0
        missing = tmp_path / "never_written.memb"
        code = main([
            "train", "--dataset", str(dataset), "--store", str(missing),
            "--out", str(tmp_path / "model.ckpt"),
        ])
        assert code == 2
        assert "never_written.memb" in capsys.readouterr().err

    def test_usage_error_exits_1(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["train", "--no-such-flag"])
        assert exc.value.code == 1

    def test_unknown_command_exits_1(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 1

    def test_bad_dataset_exits_2(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text("{not json\n")
        code = main(["notes", "--dataset", str(bad), "--out", str(tmp_path / "n.jsonl")])
        assert code == 2

    def test_end_to_end_determinism(self, tmp_path):
        a = tmp_path / "run_a"
        b = tmp_path / "run_b"
        a.mkdir()
        b.mkdir()
        ma = run_pipeline(a, seed=11, n=80, bootstrap=50)
        mb = run_pipeline(b, seed=11, n=80, bootstrap=50)
        assert ma.read_bytes() == mb.read_bytes()

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({
            "seed": 3,
            "synth": {"n_visits": 15},
            "paths": {"dataset": "from_config.jsonl"},
            "data_dir": str(tmp_path),
        }))
        assert main(["synth", "--config", str(cfg)]) == 0
        assert (tmp_path / "from_config.jsonl").exists()
        # explicit flag wins over the config path
        assert main(["synth", "--config", str(cfg), "--out", str(tmp_path / "flag.jsonl")]) == 0
        assert (tmp_path / "flag.jsonl").exists()

    def test_data_dir_env_prefix(self, tmp_path, monkeypatch):
        monkeypatch.setenv("MEME_DATA_DIR", str(tmp_path))
        synth = tmp_path / "synth.json"
        synth.write_text(json.dumps({"n_visits": 10}))
        assert main(["synth", "--synth-config", "synth.json", "--out", "ds.jsonl"]) == 0
        assert (tmp_path / "ds.jsonl").exists()


class TestOtherCommands:
    def test_ingest_command(self, tmp_path):
        arrival = tmp_path / "arrival.csv"
        arrival.write_text(
            "visit_id,patient_id,age,gender,race,arrival_transport,intime,"
            "marital_status,insurance,language,disposition\n"
            'v1,77,40,female,white,ambulance,2180-01-01 10:00:00,single,other,english,HOME\n'
        )
        out = tmp_path / "ds.jsonl"
        assert main(["ingest", "--arrival", str(arrival), "--out", str(out)]) == 0
        assert out.read_text().count("\n") == 1

    def test_ingest_missing_column_exits_2(self, tmp_path, capsys):
        arrival = tmp_path / "arrival.csv"
        arrival.write_text("visit_id,age\nv1,40\n")
        code = main(["ingest", "--arrival", str(arrival), "--out", str(tmp_path / "d.jsonl")])
        assert code == 2
        assert "missing required column" in capsys.readouterr().err

    def test_shift_report_command(self, tmp_path):
        synth = tmp_path / "synth.json"
        synth.write_text(json.dumps({"n_visits": 12}))
        da, db = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert main(["synth", "--synth-config", str(synth), "--seed", "1", "--out", str(da)]) == 0
        assert main(["synth", "--synth-config", str(synth), "--seed", "2", "--out", str(db)]) == 0
        out = tmp_path / "shift.csv"
        assert main([
            "shift-report", "--dataset-a", str(da), "--dataset-b", str(db),
            "--out", str(out), "--json", str(tmp_path / "shift.json"),
        ]) == 0
        assert out.exists() and (tmp_path / "shift.json").exists()

    def test_ablate_command(self, tmp_path):
        workdir = tmp_path
        run_pipeline(workdir, seed=5, n=60, bootstrap=20)
        out = workdir / "ablation.csv"
        code = main([
            "ablate", "--dataset", str(workdir / "dataset.jsonl"),
            "--store", str(workdir / "store.memb"), "--seed", "5",
            "--subsets", "triage;all", "--lr", "0.01", "--batch-size", "32",
            "--epochs", "2", "--bootstrap", "20",
            "--out", str(out), "--table", str(workdir / "table.csv"),
        ])
        assert code == 0
        rows = list(csv.DictReader(out.open()))
        assert {r["row"] for r in rows} == {"triage", "arrival+triage+medrecon+pyxis+vitals+codes"}

    def test_decompensation_pipeline(self, tmp_path):
        synth = tmp_path / "synth.json"
        # high event rates so the small admitted test split keeps positives
        synth.write_text(json.dumps({
            "n_visits": 400, "admit_rate": 0.5, "mortality_rate": 0.45,
            "icu_rate": 0.45, "discharge_home_rate": 0.5,
            "signal": {"modalities": ["triage"], "strength": 0.9, "task": "icu"},
        }))
        dataset, notes, store, ckpt = (
            tmp_path / "d.jsonl", tmp_path / "n.jsonl",
            tmp_path / "s.memb", tmp_path / "m.ckpt",
        )
        for argv in (
            ["synth", "--synth-config", str(synth), "--seed", "2", "--out", str(dataset)],
            ["notes", "--dataset", str(dataset), "--out", str(notes)],
            ["embed", "--notes", str(notes), "--d", "128", "--seed", "2", "--out", str(store)],
            ["train", "--dataset", str(dataset), "--store", str(store), "--seed", "2",
             "--task", "decompensation", "--lr", "0.01", "--batch-size", "32",
             "--epochs", "4", "--out", str(ckpt)],
            ["eval", "--dataset", str(dataset), "--store", str(store), "--seed", "2",
             "--task", "decompensation", "--ckpt", str(ckpt), "--bootstrap", "50",
             "--out", str(tmp_path / "m.csv")],
        ):
            assert main(argv) == 0
        rows = list(csv.DictReader((tmp_path / "m.csv").open()))
        assert {r["label"] for r in rows} == {"discharge_home", "icu", "mortality"}

    def test_numerical_failure_exits_3(self, monkeypatch, tmp_path, capsys):
        from meme_ed import cli as cli_mod
        from meme_ed.model import DivergenceDetected

        def explode(ctx):
            raise DivergenceDetected("training loss diverged at epoch 1")

        # build_parser resolves command handlers from module globals at call
        # time, so patching the module attribute reroutes dispatch
        monkeypatch.setattr(cli_mod, "cmd_synth", explode)
        code = cli_mod.main(["synth", "--out", str(tmp_path / "x.jsonl")])
        assert code == 3
        assert "diverged" in capsys.readouterr().err

    def test_msem_pipeline(self, tmp_path):
        synth = tmp_path / "synth.json"
        synth.write_text(json.dumps({"n_visits": 60}))
        dataset, notes, store, ckpt = (
            tmp_path / "d.jsonl", tmp_path / "n.jsonl",
            tmp_path / "s.memb", tmp_path / "m.ckpt",
        )
        for argv in (
            ["synth", "--synth-config", str(synth), "--seed", "2", "--out", str(dataset)],
            ["notes", "--dataset", str(dataset), "--out", str(notes)],
            ["embed", "--notes", str(notes), "--mode", "msem", "--d", "64", "--out", str(store)],
            ["train", "--dataset", str(dataset), "--store", str(store), "--mode", "msem",
             "--epochs", "2", "--batch-size", "32", "--out", str(ckpt)],
            ["eval", "--dataset", str(dataset), "--store", str(store), "--mode", "msem",
             "--ckpt", str(ckpt), "--bootstrap", "20", "--out", str(tmp_path / "m.csv")],
        ):
            assert main(argv) == 0
