"""Compare the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--graphs 300] [--size 10]
"""
from __future__ import annotations

import argparse
import random
import time

import numpy as np

from prbg import _pykernels

try:
    from prbg import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def random_grids(count: int, size: int, seed: int) -> list[np.ndarray]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        nu, nv = rng.randint(1, size), rng.randint(1, size)
        p = rng.uniform(0.1, 0.9)
        out.append(np.array([[1 if rng.random() < p else 0 for _ in range(nv)] for _ in range(nu)], dtype=np.uint8))
    return out


def timed(fn, grids) -> tuple[float, list]:
    t = time.perf_counter()
    res = [fn(a) for a in grids]
    return time.perf_counter() - t, res


def exact_table(mod, size: int) -> tuple[float, int]:
    z = [[0] * (size + 1) for _ in range(size + 1)]
    t = time.perf_counter()
    for s in range(2, 2 * size + 1):
        for a in range(size, 0, -1):
            b = s - a
            if 1 <= b <= a <= size:
                best, _ = mod.max_prbg_search(a, b, [[z[k][c] for c in range(b + 1)] for k in range(a)])
                z[a][b] = z[b][a] = best
    return time.perf_counter() - t, z[size][size]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--graphs", type=int, default=300)
    ap.add_argument("--size", type=int, default=10)
    ap.add_argument("--exact", type=int, default=5, help="solve the exact table up to this size per side")
    args = ap.parse_args()
    if _ckernels is None:
        raise SystemExit("compiled kernels are not built; run pip install -e . first")
    grids = random_grids(args.graphs, args.size, seed=1)
    print(f"{'kernel':<22}{'python s':>10}{'compiled s':>12}{'speedup':>9}")
    for name in ("fast_violation", "brute_violation"):
        tp, rp = timed(getattr(_pykernels, name), grids)
        tc, rc = timed(getattr(_ckernels, name), grids)
        assert [r is None for r in rp] == [r is None for r in rc], f"{name}: backends disagree"
        print(f"{name:<22}{tp:>10.3f}{tc:>12.3f}{tp / tc:>9.1f}")
    tp, vp = exact_table(_pykernels, args.exact)
    tc, vc = exact_table(_ckernels, args.exact)
    assert vp == vc
    print(f"{'exact table ' + str(args.exact) + 'x' + str(args.exact):<22}{tp:>10.3f}{tc:>12.3f}{tp / tc:>9.1f}")


if __name__ == "__main__":
    main()
