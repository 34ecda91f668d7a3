"""Time the compiled kernels against the numpy fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--points 4001]

Each row reports the best-of-``repeat`` wall time per backend and the
speed-up, plus the largest relative disagreement between the two outputs.
``bilinear_sum`` is absent: both backends share its BLAS-backed numpy form.
"""
import argparse
import timeit

import numpy as np

from graphene_cs import _pykernels

try:
    from graphene_cs import _ckernels
except ImportError:  # pragma: no cover - benchmark needs the compiled core
    raise SystemExit("compiled core not built; run `pip install -e . --no-build-isolation` first")


def cases(points: int, rng):
    xi = np.linspace(-30.0, 30.0, points)
    for size in (20, 80, 320):
        upper = rng.normal(size=size) + 1j * rng.normal(size=size)
        lower = rng.normal(size=size) + 1j * rng.normal(size=size)
        yield f"spinor_fields M={size}", "spinor_fields", (upper, lower, xi)
    for nmax in (40, 200):
        yield f"hermite_table n={nmax}", "hermite_table", (nmax, xi)


def max_rel_diff(a, b):
    if isinstance(a, tuple):
        return max(max_rel_diff(x, y) for x, y in zip(a, b))
    scale = np.max(np.abs(b)) or 1.0
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))) / scale)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--points", type=int, default=4001)
    args = parser.parse_args(argv)
    rng = np.random.default_rng(7)
    print(f"{'case':<24}{'cython [ms]':>13}{'numpy [ms]':>13}{'speed-up':>10}{'max rel diff':>14}")
    for label, name, call_args in cases(args.points, rng):
        fast, slow = getattr(_ckernels, name), getattr(_pykernels, name)
        t_fast = min(timeit.repeat(lambda: fast(*call_args), number=1, repeat=args.repeat))
        t_slow = min(timeit.repeat(lambda: slow(*call_args), number=1, repeat=args.repeat))
        diff = max_rel_diff(fast(*call_args), slow(*call_args))
        print(f"{label:<24}{1e3 * t_fast:>13.3f}{1e3 * t_slow:>13.3f}{t_slow / t_fast:>10.1f}{diff:>14.1e}")


if __name__ == "__main__":
    main()
