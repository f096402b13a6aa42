"""Compare the compiled and pure-NumPy split kernels on a full fit.

Runs the same mushroom training job under both backends, times each, and
verifies the resulting models are byte-identical. Usage:

    python3 benchmarks/bench_kernels.py [--trees N] [--depth D] [--repeat R]
"""

import argparse
import os
import statistics
import subprocess
import sys
import time

HERE = os.path.dirname(os.path.abspath(__file__))
REPO = os.path.dirname(HERE)
MUSHROOM = os.path.join(REPO, "data", "mushroom.csv")

_CHILD = """\
import sys, time
from tbt import data, jsonutil
from tbt.boosting import core, kernels
path, trees, depth = sys.argv[1], int(sys.argv[2]), int(sys.argv[3])
d = data.load_csv(path, label_column="class")
train, _ = data.split_train_test(d, 0.3, 42)
t0 = time.perf_counter()
e = core.fit_ensemble(train, core.FitParams(trees=trees, depth=depth))
elapsed = time.perf_counter() - t0
blob = jsonutil.dumps(core.ensemble_to_json(e))
sys.stdout.write(f"{kernels.BACKEND}\\t{elapsed:.6f}\\t{len(blob)}\\n")
sys.stdout.write(blob)
"""


def run_backend(backend: str, trees: int, depth: int) -> tuple[float, str]:
    env = dict(os.environ, TBT_KERNEL=backend)
    out = subprocess.run(
        [sys.executable, "-c", _CHILD, MUSHROOM, str(trees), str(depth)],
        env=env, capture_output=True, text=True, check=True,
    )
    header, blob = out.stdout.split("\n", 1)
    name, elapsed, _size = header.split("\t")
    if name != backend:
        raise RuntimeError(f"asked for {backend}, child picked {name}")
    return float(elapsed), blob


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--trees", type=int, default=20)
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    from tbt.boosting import kernels

    backends = sorted(kernels.available_backends())
    if "compiled" not in backends:
        print("compiled extension not built; timing the python backend only")

    results: dict[str, list[float]] = {}
    blobs: dict[str, str] = {}
    for backend in backends:
        times = []
        for _ in range(args.repeat):
            elapsed, blob = run_backend(backend, args.trees, args.depth)
            times.append(elapsed)
            blobs[backend] = blob
        results[backend] = times

    print(f"\nfit {args.trees} trees, depth {args.depth}, mushroom train split "
          f"(repeat={args.repeat}, best/median shown)\n")
    print(f"{'backend':<10} {'best (s)':>10} {'median (s)':>12}")
    for backend in backends:
        ts = results[backend]
        print(f"{backend:<10} {min(ts):>10.3f} {statistics.median(ts):>12.3f}")

    if len(blobs) == 2:
        same = blobs["python"] == blobs["compiled"]
        print(f"\nmodel JSON identical across backends: {'yes' if same else 'NO'}")
        if not same:
            sys.exit(1)
        speedup = statistics.median(results["python"]) / statistics.median(results["compiled"])
        print(f"compiled speedup over python: {speedup:.2f}x")


if __name__ == "__main__":
    main()
