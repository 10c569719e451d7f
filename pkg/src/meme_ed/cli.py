"""Command-line pipeline: synth/ingest -> notes -> embed -> train -> eval,
plus ablate and shift-report.

Every command reads upstream artifacts from disk and writes downstream ones,
so external tools (e.g. an encoder-based embedding exporter) can interpose
between stages. A JSON config supplies defaults; explicit flags win. Exit
codes: 0 success, 1 usage error, 2 data/validation error, 3 numerical
failure. MEME_DATA_DIR (or --data-dir / config "data_dir") prefixes
relative paths.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import embed as emb
from . import evaluation as ev
from . import ingest as ing
from . import model as mdl
from . import pseudonote as pn
from .errors import DataError, MemeError, NumericalError
from .modalities import CANONICAL_ORDER, Modality, parse_modality

USAGE_EXIT = 1
DATA_EXIT = 2
NUMERIC_EXIT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


class _Ctx:
    """Merged config-file + flag settings with path resolution."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config: dict = {}
        if getattr(args, "config", None):
            path = Path(args.config)
            try:
                self.config = json.loads(path.read_text(encoding="utf-8"))
            except OSError as exc:
                raise DataError(f"cannot read config {path}: {exc}") from exc
            except json.JSONDecodeError as exc:
                raise DataError(f"config {path} is not valid JSON: {exc}") from exc
        prefix = (
            getattr(args, "data_dir", None)
            or self.config.get("data_dir")
            or os.environ.get("MEME_DATA_DIR")
            or "."
        )
        self.prefix = Path(prefix)

    def get(self, flag: str, key: str | None = None, default=None):
        value = getattr(self.args, flag, None)
        if value is not None:
            return value
        if key is None:
            key = flag
        node = self.config
        for part in key.split("."):
            if not isinstance(node, dict) or part not in node:
                return default
            node = node[part]
        return node

    def path(self, flag: str, key: str | None = None, default=None) -> Path | None:
        raw = self.get(flag, key, default)
        if raw is None:
            return None
        p = Path(raw)
        return p if p.is_absolute() else self.prefix / p

    def require_path(self, flag: str, key: str | None = None) -> Path:
        p = self.path(flag, key)
        if p is None:
            raise DataError(f"missing required path: --{flag.replace('_', '-')}")
        return p

    def require_input(self, flag: str, key: str | None = None) -> Path:
        p = self.require_path(flag, key)
        if not p.exists():
            raise DataError(f"input path does not exist: {p}")
        return p


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="JSON config file; flags override it")
    sp.add_argument("--data-dir", help="prefix for relative paths (or MEME_DATA_DIR)")
    sp.add_argument("--seed", type=int, help="seed threaded to all stochastic stages")
    sp.add_argument("--jobs", type=int, help="parallel workers for per-visit stages")


def _templates(ctx: _Ctx) -> pn.TemplateSpec:
    path = ctx.path("templates", "paths.templates")
    if path is None:
        return pn.default_templates()
    if not path.exists():
        raise DataError(f"templates file does not exist: {path}")
    return pn.load_templates(path)


def _schema(ctx: _Ctx) -> ing.SchemaSpec:
    path = ctx.path("schema", "paths.schema")
    if path is None:
        return ing.default_schema()
    if not path.exists():
        raise DataError(f"schema file does not exist: {path}")
    return ing.load_schema(path)


def _seed(ctx: _Ctx) -> int:
    return int(ctx.get("seed", default=0))


def _split_ratios(ctx: _Ctx) -> tuple[float, float, float]:
    raw = ctx.get("split", default=(0.8, 0.1, 0.1))
    if isinstance(raw, str):
        parts = [float(x) for x in raw.split(",")]
    else:
        parts = [float(x) for x in raw]
    if len(parts) != 3:
        raise DataError(f"--split needs three ratios, got {raw!r}")
    return (parts[0], parts[1], parts[2])


def _task(ctx: _Ctx) -> ing.TaskKind:
    return ing.TaskKind(ctx.get("task", default="disposition"))


def _mode(ctx: _Ctx) -> str:
    mode = ctx.get("mode", default="meme")
    if mode not in ("meme", "msem"):
        raise DataError(f"--mode must be meme or msem, got {mode!r}")
    return mode


def _budget(ctx: _Ctx) -> emb.TokenBudget:
    return emb.TokenBudget(int(ctx.get("budget", default=emb.DEFAULT_TOKEN_LIMIT)))


def _model_config(ctx: _Ctx, n_modalities: int, d: int, n_labels: int, seed: int) -> mdl.ModelConfig:
    return mdl.ModelConfig(
        n_modalities=n_modalities,
        d=d,
        d_attn=int(ctx.get("d_attn", "model.d_attn", 32)),
        d_hidden=int(ctx.get("d_hidden", "model.d_hidden", 64)),
        n_labels=n_labels,
        dropout_rate=float(ctx.get("dropout", "model.dropout_rate", 0.3)),
        seed=seed,
    )


def _train_config(ctx: _Ctx, seed: int) -> mdl.TrainConfig:
    return mdl.TrainConfig(
        batch_size=int(ctx.get("batch_size", "train.batch_size", 64)),
        lr=float(ctx.get("lr", "train.lr", 5e-5)),
        max_epochs=int(ctx.get("epochs", "train.max_epochs", 10)),
        patience=int(ctx.get("patience", "train.patience", 2)),
        seed=seed,
    )


def _prepare_eval_inputs(ctx: _Ctx):
    dataset = ing.read_dataset(ctx.require_input("dataset", "paths.dataset"))
    task = _task(ctx)
    cohort = ing.filter_cohort(dataset, task)
    assignment = ing.split(cohort, _split_ratios(ctx), _seed(ctx))
    store_path = ctx.require_path("store", "paths.store")
    if not store_path.exists():
        raise DataError(f"embedding store does not exist: {store_path}")
    store = emb.import_store(store_path)
    return cohort, task, assignment, store


def cmd_synth(ctx: _Ctx) -> int:
    cfg_path = ctx.path("synth_config", "paths.synth_config")
    if cfg_path is not None:
        if not cfg_path.exists():
            raise DataError(f"synth config does not exist: {cfg_path}")
        config = ing.load_synth_config(cfg_path)
    elif isinstance(ctx.config.get("synth"), dict):
        config = ing.synth.config_from_json(ctx.config["synth"])
    else:
        config = ing.SynthConfig()
    n = ctx.get("n")
    if n is not None:
        from dataclasses import replace

        config = replace(config, n_visits=int(n))
    dataset = ing.synth_generate(config, _seed(ctx))
    out = ctx.require_path("out", "paths.dataset")
    ing.write_dataset(dataset, out)
    print(f"wrote {len(dataset)} visits to {out}")
    return 0


def cmd_ingest(ctx: _Ctx) -> int:
    schema = _schema(ctx)
    paths: dict[Modality, Path] = {}
    for modality in CANONICAL_ORDER:
        p = ctx.path(modality.value, f"paths.tables.{modality.value}")
        if p is not None:
            if not p.exists():
                raise DataError(f"{modality.value} table does not exist: {p}")
            paths[modality] = p
    if not paths:
        raise DataError("no modality tables given (use --arrival, --triage, ...)")
    dataset = ing.load_tables(paths, schema)
    rules_path = ctx.path("label_rules", "paths.label_rules")
    rules = ing.load_label_rules(rules_path) if rules_path else ing.LabelRuleSpec()
    dataset = ing.label_dataset(dataset, rules)
    out = ctx.require_path("out", "paths.dataset")
    ing.write_dataset(dataset, out)
    for diag in dataset.diagnostics:
        print(f"note: {diag}", file=sys.stderr)
    print(f"wrote {len(dataset)} visits to {out}")
    return 0


def cmd_notes(ctx: _Ctx) -> int:
    dataset = ing.read_dataset(ctx.require_input("dataset", "paths.dataset"))
    templates = _templates(ctx)
    schema = _schema(ctx)
    notes = []
    for visit in dataset.visits:
        notes.extend(pn.render_all(visit, templates, schema))
    out = ctx.require_path("out", "paths.notes")
    pn.write_notes(notes, out)
    print(f"wrote {len(notes)} notes to {out}")
    return 0


def cmd_embed(ctx: _Ctx) -> int:
    notes = pn.read_notes(ctx.require_input("notes", "paths.notes"))
    embedder_kind = ctx.get("embedder", default="hash")
    if embedder_kind != "hash":
        raise DataError(
            f"unknown embedder {embedder_kind!r}; import encoder stores via their exporter"
        )
    embedder = emb.HashEmbedder(d=int(ctx.get("d", "model.d", 256)), seed=_seed(ctx))
    store = emb.build_store(
        notes,
        embedder,
        budget=_budget(ctx),
        mode=_mode(ctx),
        jobs=int(ctx.get("jobs", default=1)),
    )
    out = ctx.require_path("out", "paths.store")
    if ctx.get("csv", default=False):
        emb.export_store_csv(store, out)
    else:
        emb.export_store(store, out)
    print(f"wrote {len(store)} vectors (d={store.d}) to {out}")
    return 0


def cmd_train(ctx: _Ctx) -> int:
    cohort, task, assignment, store = _prepare_eval_inputs(ctx)
    mode = _mode(ctx)
    seed = _seed(ctx)
    n_modalities = 1 if mode == "msem" else len(CANONICAL_ORDER)
    n_labels = 2 if task is ing.TaskKind.DISPOSITION else 3
    model_config = _model_config(ctx, n_modalities, store.d, n_labels, seed)
    result = mdl.train(
        cohort, assignment, store, model_config, _train_config(ctx, seed), task=task, mode=mode
    )
    out = ctx.require_path("out", "paths.checkpoint")
    best = result.history[result.best_epoch - 1] if result.history else None
    mdl.save_checkpoint(
        result.params,
        out,
        epoch=result.best_epoch,
        metrics={"val_loss": best.val_loss, "val_f1": best.val_f1} if best else {},
    )
    history_path = ctx.path("history", "paths.history")
    if history_path is not None:
        mdl.write_history(result.history, history_path)
    print(
        f"trained {mode} on {task.value}: best epoch {result.best_epoch}, "
        f"val_loss {result.history[result.best_epoch - 1].val_loss:.6f}; wrote {out}"
    )
    return 0


def cmd_eval(ctx: _Ctx) -> int:
    cohort, task, assignment, store = _prepare_eval_inputs(ctx)
    ckpt = ctx.require_input("ckpt", "paths.checkpoint")
    params, _ = mdl.load_checkpoint(ckpt)
    test_ids = [vid for vid in cohort.visit_ids() if vid in assignment.test]
    reports = ev.evaluate_model(
        params,
        cohort,
        test_ids,
        store,
        task,
        _mode(ctx),
        n_boot=int(ctx.get("bootstrap", "eval.bootstrap", 1000)),
        level=float(ctx.get("level", "eval.level", 0.95)),
        seed=_seed(ctx),
    )
    out = ctx.require_path("out", "paths.metrics_csv")
    ev.write_metrics_csv(reports, out, row_name=_mode(ctx))
    json_path = ctx.path("json", "paths.metrics_json")
    if json_path is not None:
        ev.write_metrics_json(reports, json_path, row_name=_mode(ctx))
    for label, metrics in reports.items():
        parts = ", ".join(
            f"{name}={metrics[name].point:.3f}±{metrics[name].half_width:.3f}"
            for name in ev.METRIC_NAMES
        )
        print(f"{label}: {parts}")
    print(f"wrote {out}")
    return 0


def _parse_subsets(raw: str | None) -> list[tuple[Modality, ...]]:
    if raw is None:
        subsets: list[tuple[Modality, ...]] = [(m,) for m in CANONICAL_ORDER]
        subsets.append(tuple(CANONICAL_ORDER))
        return subsets
    out = []
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if chunk == "all":
            out.append(tuple(CANONICAL_ORDER))
        else:
            out.append(tuple(parse_modality(name) for name in chunk.split(",")))
    if not out:
        raise DataError("no ablation subsets given")
    return out


def cmd_ablate(ctx: _Ctx) -> int:
    cohort, task, assignment, store = _prepare_eval_inputs(ctx)
    seed = _seed(ctx)
    n_labels = 2 if task is ing.TaskKind.DISPOSITION else 3
    model_config = _model_config(ctx, len(CANONICAL_ORDER), store.d, n_labels, seed)
    results = ev.ablate(
        cohort,
        store,
        _parse_subsets(ctx.get("subsets")),
        model_config,
        _train_config(ctx, seed),
        assignment,
        task=task,
        n_boot=int(ctx.get("bootstrap", "eval.bootstrap", 1000)),
        level=float(ctx.get("level", "eval.level", 0.95)),
        seed=seed,
    )
    out = ctx.require_path("out", "paths.ablation_csv")
    ev.write_ablation_csv(results, out)
    table_path = ctx.path("table", "paths.ablation_table")
    if table_path is not None:
        ev.write_ablation_table_csv(results, table_path)
    for result in results:
        label = next(iter(result.reports))
        r = result.reports[label]["auroc"]
        print(f"{result.name()}: {label} auroc={r.point:.3f}±{r.half_width:.3f}")
    print(f"wrote {out}")
    return 0


def cmd_shift_report(ctx: _Ctx) -> int:
    a = ing.read_dataset(ctx.require_input("dataset_a", "paths.dataset_a"))
    b = ing.read_dataset(ctx.require_input("dataset_b", "paths.dataset_b"))
    report = ev.shift_report(a, b)
    out = ctx.require_path("out", "paths.shift_csv")
    ev.write_shift_csv(report, out)
    json_path = ctx.path("json", "paths.shift_json")
    if json_path is not None:
        ev.write_shift_json(report, json_path)
    print(
        f"compared {len(report.categorical)} categorical and "
        f"{len(report.numeric)} numeric features; wrote {out}"
    )
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="meme-ed", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("synth", help="generate a synthetic dataset", parents=[])
    _add_common(sp)
    sp.add_argument("--synth-config", help="SynthConfig JSON file")
    sp.add_argument("--n", type=int, help="override visit count")
    sp.add_argument("--out", help="output dataset JSONL")
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("ingest", help="load modality CSVs into a dataset")
    _add_common(sp)
    for modality in CANONICAL_ORDER:
        sp.add_argument(f"--{modality.value}", help=f"{modality.value} CSV path")
    sp.add_argument("--schema", help="SchemaSpec JSON file")
    sp.add_argument("--label-rules", help="label rule JSON file")
    sp.add_argument("--out", help="output dataset JSONL")
    sp.set_defaults(func=cmd_ingest)

    sp = sub.add_parser("notes", help="render pseudo-notes from a dataset")
    _add_common(sp)
    sp.add_argument("--dataset", help="dataset JSONL")
    sp.add_argument("--templates", help="TemplateSpec JSON file")
    sp.add_argument("--schema", help="SchemaSpec JSON file")
    sp.add_argument("--out", help="output notes JSONL")
    sp.set_defaults(func=cmd_notes)

    sp = sub.add_parser("embed", help="embed notes into a store")
    _add_common(sp)
    sp.add_argument("--notes", help="notes JSONL")
    sp.add_argument("--mode", choices=("meme", "msem"))
    sp.add_argument("--embedder", choices=("hash",))
    sp.add_argument("--d", type=int, help="embedding dimension")
    sp.add_argument("--budget", type=int, help="token budget (default 512)")
    sp.add_argument("--csv", action="store_true", help="write CSV instead of binary")
    sp.add_argument("--out", help="output store path")
    sp.set_defaults(func=cmd_embed)

    def add_model_train_flags(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--dataset", help="dataset JSONL")
        sp.add_argument("--store", help="embedding store path")
        sp.add_argument("--task", choices=("disposition", "decompensation"))
        sp.add_argument("--mode", choices=("meme", "msem"))
        sp.add_argument("--split", help="train,val,test ratios (default 0.8,0.1,0.1)")
        sp.add_argument("--d-attn", type=int)
        sp.add_argument("--d-hidden", type=int)
        sp.add_argument("--dropout", type=float)
        sp.add_argument("--batch-size", type=int)
        sp.add_argument("--lr", type=float)
        sp.add_argument("--epochs", type=int)
        sp.add_argument("--patience", type=int)

    sp = sub.add_parser("train", help="train the classifier head")
    _add_common(sp)
    add_model_train_flags(sp)
    sp.add_argument("--history", help="per-epoch history CSV")
    sp.add_argument("--out", help="output checkpoint path")
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("eval", help="evaluate a checkpoint on the test split")
    _add_common(sp)
    add_model_train_flags(sp)
    sp.add_argument("--ckpt", help="checkpoint path")
    sp.add_argument("--bootstrap", type=int, help="bootstrap resamples (default 1000)")
    sp.add_argument("--level", type=float, help="confidence level (default 0.95)")
    sp.add_argument("--json", help="also write metrics JSON here")
    sp.add_argument("--out", help="output metrics CSV")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("ablate", help="train/evaluate per-modality subsets")
    _add_common(sp)
    add_model_train_flags(sp)
    sp.add_argument("--subsets", help='e.g. "arrival;triage,codes;all" (default singletons+all)')
    sp.add_argument("--bootstrap", type=int)
    sp.add_argument("--level", type=float)
    sp.add_argument("--table", help="also write a benchmark-style table CSV")
    sp.add_argument("--out", help="output ablation CSV")
    sp.set_defaults(func=cmd_ablate)

    sp = sub.add_parser("shift-report", help="compare feature distributions of two datasets")
    _add_common(sp)
    sp.add_argument("--dataset-a", help="first dataset JSONL")
    sp.add_argument("--dataset-b", help="second dataset JSONL")
    sp.add_argument("--json", help="also write shift JSON here")
    sp.add_argument("--out", help="output shift CSV")
    sp.set_defaults(func=cmd_shift_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ctx = _Ctx(args)
        return args.func(ctx)
    except NumericalError as exc:
        print(f"meme-ed: numerical failure: {exc}", file=sys.stderr)
        return NUMERIC_EXIT
    except MemeError as exc:
        print(f"meme-ed: {exc}", file=sys.stderr)
        return DATA_EXIT
    except OSError as exc:
        print(f"meme-ed: i/o error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
