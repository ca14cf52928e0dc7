"""Compare the numba and pure-numpy segment-pair classifiers.

Run with ``python3 benchmarks/bench_kernels.py``.  The numpy path is what
``BARYMORPH_DISABLE_NUMBA=1`` selects globally.
"""
import argparse
import time

import numpy as np

from barymorph.generators import random_triangulation
from barymorph.kernels import classify_segment_pairs
from barymorph.validation import planar_segments


def random_segments(m, rng, length=0.05):
    a = rng.random((m, 2))
    b = a + rng.normal(scale=length, size=(m, 2))
    return np.hstack([a, b]), np.arange(2 * m).reshape(m, 2)


def triangulation_segments(n, rng):
    d = random_triangulation(n, rng)
    return planar_segments(d.map, d.positions)


def timed(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    rng = np.random.default_rng(args.seed)
    cases = [(f"random m={m}", *random_segments(m, rng)) for m in (1_000, 10_000, 50_000)]
    cases += [(f"triangulation n={n}", *triangulation_segments(n, rng)) for n in (100, 1_000, 5_000)]
    classify_segment_pairs(*cases[0][1:], use_numba=True)  # compile outside the timings
    print(f"{'case':<24}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}{'pairs':>10}")
    for name, seg, ends in cases:
        t_nb, r_nb = timed(lambda: classify_segment_pairs(seg, ends, use_numba=True), args.repeat)
        t_np, r_np = timed(lambda: classify_segment_pairs(seg, ends, use_numba=False), args.repeat)
        same = np.array_equal(r_nb[np.lexsort(r_nb.T[::-1])], r_np[np.lexsort(r_np.T[::-1])])
        print(f"{name:<24}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>10.1f}{len(r_nb):>10}" + ("" if same else "  MISMATCH"))


if __name__ == "__main__":
    main()
