"""Command line entry points.

Exit codes: 2 flag errors (click), 3 data/file errors, 1 fit failures,
4 script validation or execution failures in apply, 5 bind failures in
serve.
"""

from __future__ import annotations

import json
import socket
import sys
from pathlib import Path

import click
import numpy as np

from . import jsonutil
from . import session as S
from .boosting import core
from .boosting.core import BoostingError, FitParams
from .data import (
    DataError,
    dataset_to_json,
    group_features,
    load_csv,
    sniff_label_column,
    split_train_test,
)

EXIT_FIT = 1
EXIT_DATA = 3
EXIT_SCRIPT = 4
EXIT_BIND = 5


def _fail(exit_code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(exit_code)


def _parse_overrides(pairs: tuple[str, ...]) -> dict[str, str]:
    out: dict[str, str] = {}
    for pair in pairs:
        name, sep, kind = pair.partition("=")
        if not sep or kind not in ("categorical", "numeric"):
            raise click.BadParameter(f"expected NAME=categorical|numeric, got {pair!r}")
        out[name] = kind
    return out


def _load(path: str, label_col: str | None, overrides: dict[str, str], positive_label: str | None):
    label: str | int = label_col if label_col is not None else sniff_label_column(path)
    return load_csv(path, label_column=label, kind_overrides=overrides, positive_label=positive_label)


@click.group()
def main() -> None:
    """Interactive tree-boosting workbench."""


@main.command()
@click.option("--data", "data_path", required=True, type=click.Path(), help="training CSV")
@click.option("--label-col", default=None, help="label column (default: class/label/first)")
@click.option("--test-data", default=None, type=click.Path(), help="separate test CSV (skips the split)")
@click.option("--trees", default=5, show_default=True, type=int)
@click.option("--depth", default=3, show_default=True, type=int)
@click.option("--eta", default=0.3, show_default=True, type=float)
@click.option("--lambda", "lam", default=1.0, show_default=True, type=float)
@click.option("--min-leaf", default=1, show_default=True, type=int)
@click.option("--min-gain", default=1e-6, show_default=True, type=float)
@click.option("--max-trees", default=512, show_default=True, type=int)
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--test-fraction", default=0.3, show_default=True, type=float)
@click.option("--out", "out_path", required=True, type=click.Path(), help="model JSON output")
@click.option("--session-out", default=None, type=click.Path(), help="also write a full session export")
@click.option("--kind-override", multiple=True, help="NAME=categorical|numeric (repeatable)")
@click.option("--positive-label", default=None)
def train(data_path, label_col, test_data, trees, depth, eta, lam, min_leaf, min_gain,
          max_trees, seed, test_fraction, out_path, session_out, kind_override, positive_label):
    """Fit a model; prints a TSV stage log (stage, train deviance, train
    error, test error; stage 0 is the prior)."""
    overrides = _parse_overrides(kind_override)
    try:
        if test_data is not None:
            train_d = _load(data_path, label_col, overrides, positive_label)
            test_d = _load(test_data, label_col, overrides, positive_label)
            if [(f.name, f.kind) for f in train_d.features] != [(f.name, f.kind) for f in test_d.features] \
                    or train_d.categories != test_d.categories or train_d.label_names != test_d.label_names:
                raise DataError("train/test feature spaces differ; export a joint dataset and split instead")
        else:
            full = _load(data_path, label_col, overrides, positive_label)
            train_d, test_d = split_train_test(full, test_fraction, seed)
    except (OSError, DataError) as exc:
        _fail(EXIT_DATA, str(exc))
    try:
        params = FitParams(trees=trees, depth=depth, eta=eta, lam=lam,
                           min_leaf=min_leaf, min_gain=min_gain, max_trees=max_trees)
    except BoostingError as exc:
        raise click.UsageError(str(exc))

    labels_train = train_d.labels.astype(np.float64)
    labels_test = test_d.labels.astype(np.float64)
    test_scores = np.full(test_d.n_samples, core.base_score_for(train_d.labels))

    def err(scores, labels) -> float:
        preds = scores >= 0.0
        return float(np.count_nonzero(preds != (labels != 0.0))) / labels.shape[0]

    def stage_line(stage: int, train_scores) -> None:
        dev = core.deviance(labels_train, train_scores)
        cols = (str(stage), jsonutil.format_float(dev),
                jsonutil.format_float(err(train_scores, labels_train)),
                jsonutil.format_float(err(test_scores, labels_test)))
        click.echo("\t".join(cols))

    stage_line(0, np.full(train_d.n_samples, core.base_score_for(train_d.labels)))

    def on_stage(stage: int, tree, gamma: float, train_scores) -> None:
        nonlocal test_scores
        test_scores = test_scores + gamma * params.eta * core.tree_output_vector(tree, test_d)
        stage_line(stage, train_scores)

    try:
        model = core.fit_ensemble(train_d, params, on_stage=on_stage)
    except BoostingError as exc:
        _fail(EXIT_FIT, f"fit failed: {exc}")
    try:
        Path(out_path).write_text(jsonutil.dumps(core.ensemble_to_json(model)) + "\n")
        if session_out is not None:
            sess = S.create_session(train_d, test_d, group_features(train_d, "single-group"), params)
            Path(session_out).write_text(S.export_session_str(sess) + "\n")
    except OSError as exc:
        _fail(EXIT_DATA, str(exc))


def _normalize_script_op(entry) -> tuple[dict, float | None]:
    """Accept both flat API ops and op_log entries ({kind, args, timestamp})."""
    if isinstance(entry, dict) and "args" in entry and isinstance(entry.get("args"), dict) \
            and set(entry) <= {"kind", "args", "timestamp", "expect_history"}:
        op = {"kind": entry.get("kind"), **entry["args"]}
        if "expect_history" in entry:
            op["expect_history"] = entry["expect_history"]
        ts = entry.get("timestamp")
        return op, (float(ts) if ts is not None else None)
    return entry, None


@main.command("apply")
@click.option("--session-export", "export_path", required=True, type=click.Path())
@click.option("--script", "script_path", required=True, type=click.Path())
@click.option("--out", "out_path", default=None, type=click.Path(), help="write the resulting session export")
def apply_cmd(export_path, script_path, out_path):
    """Replay an operation script against an imported session; prints the
    full history table (index, operation, train error, test error) as TSV."""
    try:
        export_obj = json.loads(Path(export_path).read_text())
        script_obj = json.loads(Path(script_path).read_text())
    except OSError as exc:
        _fail(EXIT_DATA, str(exc))
    except json.JSONDecodeError as exc:
        _fail(EXIT_DATA, f"bad JSON: {exc}")
    if isinstance(script_obj, dict) and "ops" in script_obj:
        script_obj = script_obj["ops"]
    if not isinstance(script_obj, list):
        _fail(EXIT_SCRIPT, "script must be a JSON array of operations (or {\"ops\": [...]})")

    ops: list[tuple[dict, float | None]] = []
    for i, entry in enumerate(script_obj):
        op, ts = _normalize_script_op(entry)
        try:
            S.validate_op_shape(op)
        except S.OperationError as exc:
            _fail(EXIT_SCRIPT, f"script op {i} invalid: {exc.message}")
        ops.append((op, ts))

    try:
        sess = S.import_session(export_obj)
    except S.OperationError as exc:
        _fail(EXIT_DATA, f"bad session export: {exc.message}")
    for i, (op, ts) in enumerate(ops):
        try:
            sess = S.apply(sess, op, timestamp=ts)
        except S.OperationError as exc:
            _fail(EXIT_SCRIPT, f"script op {i} failed: {exc.message}")
        except BoostingError as exc:
            _fail(EXIT_SCRIPT, f"script op {i} failed: {exc}")

    for rec in sess.history:
        click.echo(
            "\t".join(
                (
                    str(rec.index),
                    rec.operation,
                    jsonutil.format_float(rec.train_error),
                    jsonutil.format_float(rec.test_error),
                )
            )
        )
    if out_path is not None:
        try:
            Path(out_path).write_text(S.export_session_str(sess) + "\n")
        except OSError as exc:
            _fail(EXIT_DATA, str(exc))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8642, show_default=True, type=int)
@click.option("--data-dir", default=None, type=click.Path(), help="directory of CSVs registered by stem")
@click.option("--ui-dir", default=None, type=click.Path(), help="serve this directory statically at /")
def serve(host, port, data_dir, ui_dir):
    """Run the HTTP service."""
    from .service import create_app, run

    datasets: dict[str, str] = {}
    if data_dir is not None:
        root = Path(data_dir)
        if not root.is_dir():
            _fail(EXIT_DATA, f"not a directory: {data_dir}")
        for p in sorted(root.glob("*.csv")):
            datasets[p.stem] = str(p)
    if ui_dir is not None and not Path(ui_dir).is_dir():
        _fail(EXIT_DATA, f"not a directory: {ui_dir}")
    try:
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
        probe.close()
    except OSError as exc:
        _fail(EXIT_BIND, f"cannot bind {host}:{port}: {exc}")
    run(create_app(datasets=datasets, ui_dir=ui_dir), host=host, port=port)


@main.command("export-dataset")
@click.option("--data", "data_path", required=True, type=click.Path())
@click.option("--label-col", default=None)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--kind-override", multiple=True, help="NAME=categorical|numeric (repeatable)")
@click.option("--positive-label", default=None)
def export_dataset(data_path, label_col, out_path, kind_override, positive_label):
    """Convert a CSV into the canonical dataset JSON."""
    overrides = _parse_overrides(kind_override)
    try:
        d = _load(data_path, label_col, overrides, positive_label)
        Path(out_path).write_text(jsonutil.dumps(dataset_to_json(d)) + "\n")
    except (OSError, DataError) as exc:
        _fail(EXIT_DATA, str(exc))


if __name__ == "__main__":
    main()
