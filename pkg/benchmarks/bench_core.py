"""Compare the compiled enumeration core with the numpy fallback.

    python3 benchmarks/bench_core.py [--repeat 3]

Each row times one call on the same inputs and checks the outputs agree
bit for bit.
"""

import argparse
from math import comb
import timeit

import numpy as np

from glstat import _backend
from glstat import _enumerate_python as py
from glstat.kernels import gm_pareto_kernel


def cases(rng):
    x = 2.0 * (1.0 - rng.random(400)) ** -1.0
    logs = np.log(x)
    for n, m in ((400, 2), (120, 3), (60, 4)):
        s = np.sort(logs[:n])
        scale = gm_pareto_kernel(m).params["scale"]
        yield f"gm values n={n} m={m}", "gm_kernel_values", (s, m, scale, False, comb(n, m))
    for n, m in ((400, 2), (60, 4)):
        s = np.sort(x[:n])
        yield f"sum values n={n} m={m}", "sum_kernel_values", (s, m, 2.0, comb(n, m))
    for b, m in ((15, 2), (15, 4), (20, 4)):
        scale = gm_pareto_kernel(m).params["scale"]
        count = comb(b, m)
        args = (logs[:100], b, m, scale, False, count, (count + 1) // 2)
        yield f"window medians n=100 b={b} m={m}", "gm_window_quantiles", args


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    compiled = _backend.compiled_core
    if compiled is None:
        raise SystemExit("compiled core not built; run `pip install -e . --no-build-isolation`")
    rng = np.random.default_rng(0)
    print(f"{'case':<34}{'compiled ms':>12}{'python ms':>12}{'speedup':>9}  identical")
    for label, name, call in cases(rng):
        fc, fp = getattr(compiled, name), getattr(py, name)
        tc = min(timeit.repeat(lambda: fc(*call), number=1, repeat=args.repeat)) * 1e3
        tp = min(timeit.repeat(lambda: fp(*call), number=1, repeat=args.repeat)) * 1e3
        same = np.array_equal(fc(*call), fp(*call))
        print(f"{label:<34}{tc:>12.2f}{tp:>12.2f}{tp / tc:>9.1f}  {same}")


if __name__ == "__main__":
    main()
