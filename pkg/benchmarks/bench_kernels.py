"""Compare the compiled kernels with the pure-Python fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat N] [--skip-end-to-end]

Kernel timings call both implementations directly on identical random
workloads shaped like the ones the local engine produces.  The end-to-end
timing runs one overorder computation in a subprocess per backend, selected
with ``OVERORDERS_PURE_PYTHON``.
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit

from overorders.exactla import _kernels_py

try:
    from overorders.exactla import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None


def workloads(rng: random.Random):
    n = 8
    D = 2**12
    hnf_rows = [[rng.randrange(-(10**6), 10**6) for _ in range(n)] for _ in range(2 * n)]
    p = 29
    rref_rows = [[rng.randrange(p) for _ in range(24)] for _ in range(20)]
    table = [[[(k, rng.randrange(-40, 40)) for k in range(n) if rng.random() < 0.5] for _ in range(n)] for _ in range(n)]
    a = [rng.randrange(10**6) for _ in range(n)]
    b = [rng.randrange(10**6) for _ in range(n)]
    H = _kernels_py.hnf_mod(hnf_rows, n, D)
    coeffs = [rng.randrange(-9, 9) for _ in range(n)]
    v = [sum(c * h for c, h in zip(coeffs, col)) for col in zip(*H)]
    R, piv = _kernels_py.rref_mod(rref_rows[:10], 24, p)
    vec = [rng.randrange(p) for _ in range(24)]
    return {
        "hnf_mod (n=8, D=2^12)": lambda k: k.hnf_mod(hnf_rows, n, D),
        "rref_mod (20x24 over F_29)": lambda k: k.rref_mod(rref_rows, 24, p),
        "reduce_mod (24 cols, F_29)": lambda k: k.reduce_mod(vec, R, piv, p),
        "solve_upper (n=8)": lambda k: k.solve_upper(H, v),
        "mul_mod (n=8, N=2^12)": lambda k: k.mul_mod(a, b, table, D),
    }


SNIPPET = """
import time
from overorders.algebra import from_polynomial
from overorders.order import equation_order
from overorders.engine import overorders
m = 5**8
L = equation_order(from_polynomial([[-m, -m, -m, -m, 1]]))
t = time.perf_counter()
n = overorders(L).count
print(n, time.perf_counter() - t)
"""


def end_to_end(pure: bool) -> tuple[int, float]:
    env = dict(os.environ)
    if pure:
        env["OVERORDERS_PURE_PYTHON"] = "1"
    else:
        env.pop("OVERORDERS_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", SNIPPET], env=env, capture_output=True, text=True, check=True)
    count, secs = out.stdout.split()
    return int(count), float(secs)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=2000)
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args(argv)
    if _kernels_c is None:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
        return 1
    rng = random.Random(20240601)
    print(f"{'kernel':32s} {'python us':>10s} {'cython us':>10s} {'speedup':>8s}")
    for name, fn in workloads(rng).items():
        if fn(_kernels_py) != fn(_kernels_c):
            print(f"{name}: backends disagree")
            return 2
        tp = min(timeit.repeat(lambda: fn(_kernels_py), number=args.repeat, repeat=3)) / args.repeat
        tc = min(timeit.repeat(lambda: fn(_kernels_c), number=args.repeat, repeat=3)) / args.repeat
        print(f"{name:32s} {tp * 1e6:10.2f} {tc * 1e6:10.2f} {tp / tc:7.1f}x")
    if not args.skip_end_to_end:
        n_c, t_c = end_to_end(False)
        n_p, t_p = end_to_end(True)
        print()
        print(f"overorders of x^4 - 5^8(x^3+x^2+x+1): {n_c} orders (python {n_p})")
        print(f"  python {t_p:.2f} s   cython {t_c:.2f} s   speedup {t_p / t_c:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
