"""Time each hot kernel compiled by numba against its interpreted twin.

    python benchmarks/bench_kernels.py [--repeat 5]

Both paths receive identical inputs, and the outputs are compared before
timing. Under ENSEMBLES_DISABLE_NUMBA=1 only the interpreted column is
filled in.
"""

import argparse
import time

import numpy as np

from ensembles import _accel, _kernels
from ensembles.plancherel import _fixed_ratios


def cases(rng):
    perm = rng.permutation(20_000).astype(np.int64)
    word = rng.integers(1, 50, size=20_000).astype(np.int64)
    width = int(_kernels.patience_length(word, False))
    height = int(_kernels.patience_length(word[::-1].copy(), True))
    return [
        ("patience_length n=2e4", _kernels.patience_length, (perm, True)),
        ("row_insertion_shape n=2e4", _kernels.row_insertion_shape, (word, width, height)),
        ("ewens_insertion n=1e5", _kernels.ewens_insertion, (rng.random(100_000), 1.5)),
        ("stick_breaking_top k=10", _kernels.stick_breaking_top, (rng.random(400), 2.0, 10, 1e-3)),
        ("plancherel_growth n=2e3", _kernels.plancherel_growth, (rng.random(2_000),)),
        ("involution_pairs n=1e4", _kernels.involution_pairs, (rng.random((10_000, 2)), _fixed_ratios(10_000))),
        ("last_passage 200x200", _kernels.last_passage, (rng.integers(0, 5, size=(200, 200)).astype(np.int64),)),
        ("bessel_minimal_chain top=60", _kernels.bessel_minimal_chain, (0.0, 2.8, 60)),
    ]


def best_of(func, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - t)
    return best


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float), rtol=1e-12, atol=0)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"backend: {_accel.backend()}")
    print(f"{'kernel':32s} {'numba [ms]':>12s} {'python [ms]':>12s} {'speedup':>9s}")
    for name, func, fargs in cases(rng):
        py = getattr(func, "py_func", func)
        if _accel.HAS_NUMBA:
            func(*fargs)  # compile outside the timed region
            assert same(func(*fargs), py(*fargs)), name
            fast = best_of(func, fargs, args.repeat)
        slow = best_of(py, fargs, max(1, args.repeat // 2))
        if _accel.HAS_NUMBA:
            print(f"{name:32s} {fast * 1e3:12.3f} {slow * 1e3:12.2f} {slow / fast:8.0f}x")
        else:
            print(f"{name:32s} {'-':>12s} {slow * 1e3:12.2f} {'-':>9s}")


if __name__ == "__main__":
    main()
