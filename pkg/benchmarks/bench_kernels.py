"""Time the numba-compiled kernels against the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 20] [--json]

Both flavours are imported in one process, so this needs numba installed and
MWTREE_DISABLE_NUMBA unset.  The last column is numpy time / numba time.
"""
import argparse
import json
import sys
import timeit

from mwtree import _accel, kernels
from mwtree.generate import make_rng, random_instance
from mwtree.matrices import build
from mwtree.verify import run_all


def _best(fn, repeat):
    fn()  # compile / warm caches
    number = max(1, int(0.02 / max(timeit.timeit(fn, number=1), 1e-7)))
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def cases():
    rng = make_rng(0)
    for dim in (12, 36, 72, 120):
        a = rng.standard_normal((dim, dim))
        yield "lu_factor", f"{dim}x{dim}", (lambda a=a: kernels.lu_factor_loops(a)), (lambda a=a: kernels.lu_factor_numpy(a))
    for n, s in ((12, 2), (30, 3), (60, 3)):
        t = random_instance(n, s, "diagonal", 1)
        side, w = t.edge_sides, t.weights
        d = kernels.path_block_sums_numpy(side, w)
        yield ("path_block_sums", f"n={n} s={s}",
               lambda side=side, w=w: kernels.path_block_sums_loops(side, w),
               lambda side=side, w=w: kernels.path_block_sums_numpy(side, w))
        yield ("block_square", f"n={n} s={s}",
               lambda d=d: kernels.block_square_loops(d), lambda d=d: kernels.block_square_numpy(d))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=15)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    if not _accel.NUMBA_AVAILABLE:
        print("numba is disabled or missing; nothing to compare against", file=sys.stderr)
        return 2

    rows = []
    for kernel, size, fast, slow in cases():
        t_fast, t_slow = _best(fast, args.repeat), _best(slow, args.repeat)
        rows.append({"kernel": kernel, "size": size, "numba_s": t_fast, "numpy_s": t_slow, "speedup": t_slow / t_fast})

    # end to end: build every matrix and run every check on one mid-size tree
    t = random_instance(30, 3, "diagonal", 2, "no-deg2")
    e2e = _best(lambda: run_all(t, build(t)), max(3, args.repeat // 3))
    if args.json:
        print(json.dumps({"kernels": rows, "run_all_n30_s3_s": e2e}, indent=2))
        return 0
    print(f"{'kernel':<16} {'size':<10} {'numba':>11} {'numpy':>11} {'ratio':>7}")
    for r in rows:
        print(f"{r['kernel']:<16} {r['size']:<10} {r['numba_s'] * 1e6:>9.1f}us {r['numpy_s'] * 1e6:>9.1f}us {r['speedup']:>6.1f}x")
    print(f"run_all on n=30, s=3 with the active (numba) backend: {e2e * 1e3:.1f} ms")
    return 0


if __name__ == "__main__":
    sys.exit(main())
