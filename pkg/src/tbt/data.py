"""Dataset ingestion and bookkeeping.

Loads delimited files with mixed categorical/numeric columns into a columnar
form, provides a deterministic seeded train/test split, and groups features
for display. Datasets are immutable once built; subsetting shares feature
metadata and allocates fresh column arrays.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import jsonutil

MISSING_TOKENS = ("", "?")

CATEGORICAL = "categorical"
NUMERIC = "numeric"


class DataError(ValueError):
    """Malformed input data or invalid ingestion arguments."""


@dataclass(frozen=True)
class FeatureMeta:
    id: int
    name: str
    kind: str  # "categorical" | "numeric"


@dataclass
class Dataset:
    """Columnar dataset: one array per feature, plus binary labels.

    Categorical columns hold int32 codes into ``categories[fid]`` (sorted raw
    strings); numeric columns hold float64. ``labels`` is uint8 in {0, 1} and
    ``label_names`` maps 0/1 back to the raw label values.
    """

    features: list[FeatureMeta]
    columns: list[np.ndarray]
    categories: list[list[str] | None]
    labels: np.ndarray
    label_names: tuple[str, str]
    _presort: dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def n_samples(self) -> int:
        return int(self.labels.shape[0])

    @property
    def n_features(self) -> int:
        return len(self.features)

    def presort(self, fid: int) -> np.ndarray:
        """Sample ids sorted by (feature value asc, id asc), cached."""
        order = self._presort.get(fid)
        if order is None:
            order = np.argsort(self.columns[fid], kind="stable")
            self._presort[fid] = order
        return order

    def category_name(self, fid: int, code: int) -> str:
        cats = self.categories[fid]
        assert cats is not None
        return cats[code]


def _parse_numeric(cell: str) -> float | None:
    try:
        v = float(cell)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


def load_csv(
    path: str,
    label_column: str | int = 0,
    kind_overrides: dict[str, str] | None = None,
    positive_label: str | None = None,
    delimiter: str = ",",
) -> Dataset:
    """Load a delimited file into a Dataset.

    The label column (by name or index) must take exactly two distinct values;
    the lexicographically larger one maps to class 1 unless ``positive_label``
    overrides it. Column kinds are inferred: if every non-missing cell parses
    as a finite float the column is numeric, otherwise categorical.
    ``kind_overrides`` (feature name -> kind) forces a kind; forcing numeric
    on an unparsable column is an error. Missing tokens ('?' or empty) are
    only legal in categorical columns, where they intern like any category.
    """
    kind_overrides = kind_overrides or {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if len(set(header)) != len(header):
            raise DataError(f"{path}: duplicate column names in header")
        rows: list[list[str]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}"
                )
            rows.append([c.strip() for c in row])
    if not rows:
        raise DataError(f"{path}: no data rows")

    if isinstance(label_column, int):
        if not 0 <= label_column < len(header):
            raise DataError(f"label column index {label_column} out of range")
        label_idx = label_column
    else:
        try:
            label_idx = header.index(label_column)
        except ValueError:
            raise DataError(f"label column {label_column!r} not in header") from None

    raw_labels = [r[label_idx] for r in rows]
    distinct = sorted(set(raw_labels))
    if len(distinct) != 2:
        raise DataError(
            f"label column must take exactly 2 values, got {len(distinct)}: {distinct[:5]}"
        )
    if positive_label is not None:
        if positive_label not in distinct:
            raise DataError(f"positive label {positive_label!r} not present")
        neg = distinct[0] if distinct[1] == positive_label else distinct[1]
        label_names = (neg, positive_label)
    else:
        label_names = (distinct[0], distinct[1])
    labels = np.fromiter(
        (1 if v == label_names[1] else 0 for v in raw_labels), dtype=np.uint8, count=len(rows)
    )

    features: list[FeatureMeta] = []
    columns: list[np.ndarray] = []
    categories: list[list[str] | None] = []
    fid = 0
    for col_idx, name in enumerate(header):
        if col_idx == label_idx:
            continue
        cells = [r[col_idx] for r in rows]
        override = kind_overrides.get(name)
        if override not in (None, CATEGORICAL, NUMERIC):
            raise DataError(f"bad kind override for {name!r}: {override!r}")
        if override == NUMERIC or override is None:
            parsed = [None if c in MISSING_TOKENS else _parse_numeric(c) for c in cells]
            missing = any(c in MISSING_TOKENS for c in cells)
            numeric_ok = not missing and all(v is not None for v in parsed)
        else:
            numeric_ok = False
        if override == NUMERIC and not numeric_ok:
            raise DataError(f"column {name!r} forced numeric but has non-numeric cells")
        if numeric_ok and override != CATEGORICAL:
            kind = NUMERIC
            col = np.array([p for p in parsed], dtype=np.float64)
            cats = None
        else:
            kind = CATEGORICAL
            cats = sorted(set(cells))
            index = {c: i for i, c in enumerate(cats)}
            col = np.fromiter((index[c] for c in cells), dtype=np.int32, count=len(cells))
        features.append(FeatureMeta(id=fid, name=name, kind=kind))
        columns.append(col)
        categories.append(cats)
        fid += 1

    return Dataset(
        features=features,
        columns=columns,
        categories=categories,
        labels=labels,
        label_names=label_names,
    )


def sniff_label_column(path: str, delimiter: str = ",") -> str | int:
    """Registry/CLI convention: 'class' if present, else 'label', else the
    first column."""
    with open(path, newline="") as fh:
        header = [h.strip() for h in fh.readline().split(delimiter)]
    if "class" in header:
        return "class"
    if "label" in header:
        return "label"
    return 0


# --- seeded split ---------------------------------------------------------

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 generator; the only randomness source in the package."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)


def shuffled_indices(n: int, seed: int) -> list[int]:
    """Fisher-Yates shuffle of range(n) driven by SplitMix64(seed)."""
    rng = SplitMix64(seed)
    idx = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.next_u64() % (i + 1)
        idx[i], idx[j] = idx[j], idx[i]
    return idx


def subset(d: Dataset, ids: Sequence[int]) -> Dataset:
    ids = np.asarray(ids, dtype=np.intp)
    return Dataset(
        features=d.features,
        columns=[col[ids] for col in d.columns],
        categories=d.categories,
        labels=d.labels[ids],
        label_names=d.label_names,
    )


def split_train_test(d: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Deterministic split; the test part gets ceil(n * test_fraction) rows.

    Both parts keep their rows in original dataset order. Degenerate splits
    (empty train or test) raise DataError.
    """
    if not 0.0 < test_fraction < 1.0:
        raise DataError(f"test_fraction must be in (0, 1), got {test_fraction}")
    n = d.n_samples
    if n < 2:
        raise DataError("need at least 2 samples to split")
    n_test = math.ceil(n * test_fraction)
    if n_test <= 0 or n_test >= n:
        raise DataError(f"degenerate split: {n - n_test} train / {n_test} test")
    order = shuffled_indices(n, seed)
    test_ids = sorted(order[:n_test])
    train_ids = sorted(order[n_test:])
    return subset(d, train_ids), subset(d, test_ids)


# --- grouping -------------------------------------------------------------


@dataclass
class FeatureGrouping:
    strategy: str
    groups: dict[str, list[int]]  # label -> sorted feature ids


def group_features(d: Dataset, strategy: str = "single-group") -> FeatureGrouping:
    """Partition feature ids into named display groups.

    by-prefix: group label is the name up to the first '-' or '_' (whole name
    when neither occurs). by-kind: "categorical" / "numeric". single-group:
    everything under "all".
    """
    groups: dict[str, list[int]] = {}
    if strategy == "by-prefix":
        for f in d.features:
            cut = len(f.name)
            for sep in "-_":
                pos = f.name.find(sep)
                if pos != -1:
                    cut = min(cut, pos)
            groups.setdefault(f.name[:cut], []).append(f.id)
    elif strategy == "by-kind":
        for f in d.features:
            groups.setdefault(f.kind, []).append(f.id)
    elif strategy == "single-group":
        groups["all"] = [f.id for f in d.features]
    else:
        raise DataError(f"unknown grouping strategy {strategy!r}")
    return FeatureGrouping(strategy=strategy, groups={k: sorted(v) for k, v in sorted(groups.items())})


# --- serialization --------------------------------------------------------


def dataset_to_json(d: Dataset) -> dict:
    feats = []
    for f in d.features:
        obj: dict = {"id": f.id, "name": f.name, "kind": f.kind}
        if f.kind == CATEGORICAL:
            obj["categories"] = list(d.categories[f.id])
        feats.append(obj)
    cols = []
    for f in d.features:
        col = d.columns[f.id]
        if f.kind == CATEGORICAL:
            cols.append([int(v) for v in col])
        else:
            cols.append([float(v) for v in col])
    return {
        "features": feats,
        "label_names": [d.label_names[0], d.label_names[1]],
        "labels": [int(v) for v in d.labels],
        "columns": cols,
    }


def dataset_from_json(obj: dict) -> Dataset:
    try:
        feats_in = obj["features"]
        label_names = obj["label_names"]
        labels_in = obj["labels"]
        cols_in = obj["columns"]
    except (KeyError, TypeError) as exc:
        raise DataError(f"bad dataset JSON: missing {exc}") from None
    if len(label_names) != 2:
        raise DataError("bad dataset JSON: label_names must have 2 entries")
    if len(feats_in) != len(cols_in):
        raise DataError("bad dataset JSON: features/columns length mismatch")
    n = len(labels_in)
    features: list[FeatureMeta] = []
    columns: list[np.ndarray] = []
    categories: list[list[str] | None] = []
    for i, fo in enumerate(feats_in):
        kind = fo["kind"]
        if fo["id"] != i:
            raise DataError(f"bad dataset JSON: feature ids must be 0..F-1, got {fo['id']} at {i}")
        if kind not in (CATEGORICAL, NUMERIC):
            raise DataError(f"bad dataset JSON: kind {kind!r}")
        col = cols_in[i]
        if len(col) != n:
            raise DataError(f"bad dataset JSON: column {i} length {len(col)} != {n}")
        if kind == CATEGORICAL:
            cats = [str(c) for c in fo["categories"]]
            arr = np.array(col, dtype=np.int32)
            if arr.size and (arr.min() < 0 or arr.max() >= len(cats)):
                raise DataError(f"bad dataset JSON: column {i} has out-of-range codes")
            categories.append(cats)
        else:
            arr = np.array(col, dtype=np.float64)
            if arr.size and not np.all(np.isfinite(arr)):
                raise DataError(f"bad dataset JSON: column {i} has non-finite values")
            categories.append(None)
        features.append(FeatureMeta(id=i, name=str(fo["name"]), kind=kind))
        columns.append(arr)
    labels = np.array(labels_in, dtype=np.uint8)
    if labels.size and labels.max() > 1:
        raise DataError("bad dataset JSON: labels must be 0/1")
    return Dataset(
        features=features,
        columns=columns,
        categories=categories,
        labels=labels,
        label_names=(str(label_names[0]), str(label_names[1])),
    )


def dataset_to_json_str(d: Dataset) -> str:
    return jsonutil.dumps(dataset_to_json(d))
