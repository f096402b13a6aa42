import os

import numpy as np
import pytest

from tbt import data
from tbt.boosting import core

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
MUSHROOM_CSV = os.path.join(REPO, "data", "mushroom.csv")

XOR_CSV = "label,a,b\n0,x,x\n1,x,y\n1,y,x\n0,y,y\n"

# XOR has zero first-order signal at the root, so depth-1 gains sit at 0 and
# the default min_gain would refuse to split. The fixture params lower the
# floor so the depth-2 solution is reachable.
XOR_PARAMS = core.FitParams(trees=2, depth=2, eta=1.0, lam=1.0, min_leaf=1, min_gain=-1.0)


@pytest.fixture()
def make_csv(tmp_path):
    def _make(text, name="d.csv"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _make


@pytest.fixture(scope="session")
def xor_dataset(tmp_path_factory):
    p = tmp_path_factory.mktemp("xor") / "xor.csv"
    p.write_text(XOR_CSV)
    return data.load_csv(str(p), label_column="label")


@pytest.fixture(scope="session")
def xor_session(xor_dataset):
    # Sessions are immutable values; sharing one across tests is safe.
    grouping = data.group_features(xor_dataset, "single-group")
    from tbt import session as S

    return S.create_session(xor_dataset, xor_dataset, grouping, XOR_PARAMS)


@pytest.fixture(scope="session")
def mushroom():
    return data.load_csv(MUSHROOM_CSV, label_column="class")


@pytest.fixture(scope="session")
def mushroom_split(mushroom):
    return data.split_train_test(mushroom, 0.3, 42)


def random_fixture(seed, max_n=12, max_f=4, min_n=4):
    """Small dataset with mixed feature kinds built straight from JSON.

    Columns draw from small value pools so duplicate values (numeric) and
    shared categories are common; with some probability a column is an exact
    copy of the previous one, forcing exact gain ties across features.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    n = int(rng.integers(min_n, max_n + 1))
    nf = int(rng.integers(1, max_f + 1))
    labels = rng.integers(0, 2, size=n).tolist()
    if len(set(labels)) == 1:
        labels[0] = 1 - labels[0]
    feats = []
    cols = []
    pool = [-3.5, 0.0, 1.0, 2.5, 2.5, 7.25]
    for j in range(nf):
        if j > 0 and rng.random() < 0.3:
            prev = feats[-1]
            feats.append({"id": j, "name": f"f{j}", "kind": prev["kind"],
                          **({"categories": prev["categories"]} if "categories" in prev else {})})
            cols.append(list(cols[-1]))
            continue
        if rng.random() < 0.5:
            feats.append({"id": j, "name": f"f{j}", "kind": "numeric"})
            cols.append([float(rng.choice(pool)) for _ in range(n)])
        else:
            cats = ["a", "b", "c"][: int(rng.integers(2, 4))]
            feats.append({"id": j, "name": f"f{j}", "kind": "categorical", "categories": cats})
            cols.append([int(rng.integers(0, len(cats))) for _ in range(n)])
    return data.dataset_from_json(
        {"features": feats, "label_names": ["n", "p"], "labels": labels, "columns": cols}
    )


def random_scores(d, seed, scale=2.0):
    rng = np.random.Generator(np.random.PCG64(seed ^ 0xA5A5))
    return rng.normal(0.0, scale, size=d.n_samples)
