"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import math
import timeit

import numpy as np

from swiptevt import _backend
from swiptevt.exact import SERIES_TOL, NU_SERIES_MAX

MAX_TERMS = 200


def cases(k):
    rng = np.random.default_rng(0)
    gammas = np.geomspace(1e-3, 10.0, 2000)
    theta, nu = rng.uniform(1.0, 3.0, 200), rng.uniform(0.0, 1.0, 200)
    return {
        "expint n in {1,5,30}, 667 x": lambda: [k.expint(n, x) for n in (1, 5, 30) for x in gammas[::3]],
        "expint_orders kmax=60": lambda: [k.expint_orders(x, 60) for x in gammas[::20]],
        "link cdf series, 2000 points": lambda: k.link_cdf_series_many(
            2.0, 3.0, gammas, SERIES_TOL, MAX_TERMS, NU_SERIES_MAX, math.inf),
        "u sums, L=200 x 2000 points": lambda: k.u_sums(theta, nu, gammas),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    names = ["python"] + (["cython"] if _backend.BACKEND == "cython" else [])
    timings = {}
    for name in names:
        for label, fn in cases(_backend.get_kernels(name)).items():
            timings[label, name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
    print(f"{'kernel':34s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for label in cases(_backend.get_kernels("python")):
        py = timings[label, "python"]
        cy = timings.get((label, "cython"))
        tail = f"{1e3 * cy:10.3f} {py / cy:8.1f}" if cy else f"{'n/a':>10s} {'':>8s}"
        print(f"{label:34s} {1e3 * py:10.3f} {tail}")


if __name__ == "__main__":
    main()
