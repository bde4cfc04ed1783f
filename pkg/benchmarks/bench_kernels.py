"""Compare the compiled elimination kernels with the pure-Python ones.

Usage::

    python benchmarks/bench_kernels.py [--sizes 8 16 32] [--repeat 5] [--end-to-end]

The kernel timings call both implementations on the same random integer and
mod-p matrices and check that they agree.  ``--end-to-end`` also times the
EX49A Hasse diagram in a subprocess per backend (``TILTQUIVER_PURE=1`` forces
the fallback).
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from tiltquiver import _kernels_py

try:
    from tiltquiver import _kernels as _compiled
except ImportError:
    _compiled = None

P = 10007


def random_rows(rng, n, density=0.5, bound=9):
    return [[rng.randint(-bound, bound) if rng.random() < density else 0 for _ in range(n)] for _ in range(n)]


def bench_kernels(sizes, repeat):
    rng = random.Random(0)
    print(f"{'kernel':<10}{'size':>6}{'python ms':>12}{'compiled ms':>14}{'speedup':>10}")
    for n in sizes:
        rows = random_rows(rng, n)
        mod_rows = [[x % P for x in r] for r in rows]
        cases = [("rref_int", (rows, n)), ("rref_mod", (mod_rows, n, P))]
        for name, args in cases:
            py = getattr(_kernels_py, name)
            t_py = min(timeit.repeat(lambda: py(*args), number=1, repeat=repeat)) * 1e3
            if _compiled is None:
                print(f"{name:<10}{n:>6}{t_py:>12.2f}{'n/a':>14}{'':>10}")
                continue
            cy = getattr(_compiled, name)
            if cy(*args) != py(*args):
                raise SystemExit(f"{name} disagrees on a {n}x{n} matrix")
            t_cy = min(timeit.repeat(lambda: cy(*args), number=1, repeat=repeat)) * 1e3
            print(f"{name:<10}{n:>6}{t_py:>12.2f}{t_cy:>14.2f}{t_py / t_cy:>9.1f}x")


def bench_end_to_end():
    code = ("import time; from tiltquiver import kernels; from tiltquiver.formats import load_fixture; "
            "from tiltquiver.tilting import hasse_diagram; t = time.perf_counter(); "
            "hasse_diagram(load_fixture('EX49A')); print(kernels.BACKEND, round(time.perf_counter() - t, 3))")
    for pure in ("", "1"):
        env = dict(os.environ, TILTQUIVER_PURE=pure)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        backend, secs = out.stdout.split()
        print(f"EX49A Hasse diagram with the {backend} kernels: {secs} s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 48])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args()
    bench_kernels(args.sizes, args.repeat)
    if args.end_to_end:
        bench_end_to_end()


if __name__ == "__main__":
    main()
