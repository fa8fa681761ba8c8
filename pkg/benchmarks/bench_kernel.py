"""Compare the compiled elimination kernel with the pure-Python fallback.

Run ``python3 benchmarks/bench_kernel.py``.  Every case checks that both
kernels return identical integers before timing them.
"""

import argparse
import random
import time

from hocat import linalg
from hocat._pykernel import ff_gauss_jordan as python_kernel


def _random_matrix(rng, rows, cols, spread, density):
    return [[rng.randint(-spread, spread) if rng.random() < density else 0 for _ in range(cols)] for _ in range(rows)]


def _timed(kernel, matrices, ncols, repeat):
    best = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = [kernel([list(r) for r in m], ncols) for m in matrices]
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return best, out


def _workload():
    """Homology tables of every hom of W_3 at its full stage."""
    from hocat.homotopy import homology_table
    from hocat.wconstruct import w_construction

    stage = w_construction(3)
    cat = stage.category
    return [homology_table(space, cat.stage, 4) for space in cat.homs.values()]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    cases = [
        ("sparse 30x30", 30, 30, 2, 0.2, 20),
        ("dense 40x40", 40, 40, 3, 1.0, 5),
        ("wide 20x80", 20, 80, 2, 0.5, 10),
        ("overflow 12x12", 12, 12, 10**6, 1.0, 5),
    ]
    print(f"kernel selected at import: {linalg.KERNEL}")
    print(f"{'case':<16}{'python s':>12}{'compiled s':>12}{'speedup':>10}")
    for label, rows, cols, spread, density, count in cases:
        mats = [_random_matrix(rng, rows, cols, spread, density) for _ in range(count)]
        slow, ref = _timed(python_kernel, mats, cols, args.repeat)
        fast, got = _timed(linalg.ff_gauss_jordan, mats, cols, args.repeat)
        if ref != got:
            raise SystemExit(f"{label}: kernels disagree")
        print(f"{label:<16}{slow:>12.4f}{fast:>12.4f}{slow / fast:>10.1f}")
    for label, kernel in [("python", python_kernel), ("compiled", linalg.ff_gauss_jordan)]:
        linalg.ff_gauss_jordan, saved = kernel, linalg.ff_gauss_jordan
        try:
            start = time.perf_counter()
            _workload()
            print(f"W_3 homology with {label} kernel: {time.perf_counter() - start:.3f} s")
        finally:
            linalg.ff_gauss_jordan = saved


if __name__ == "__main__":
    main()
