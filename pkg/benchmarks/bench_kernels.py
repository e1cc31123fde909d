"""Compare the compiled and pure-Python homology kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each case is a random composable pair ``d_out * d_in = 0`` over Z/p^m of
the given size (middle rank ``n``).  Both kernels must return the same
exponents; the table reports the best-of-``repeat`` wall time.
"""

import argparse
import json
import random
import sys
import timeit

from favres import _zpm

try:
    from favres import _zpm_core
except ImportError:
    _zpm_core = None

CASES = [(3, 1, 8), (3, 2, 16), (2, 3, 32), (5, 2, 64), (3, 2, 96), (2, 4, 128)]


def composable(p, m, n, rng):
    """d_in (n x n) and d_out (n x n) with d_out d_in = 0, in split form
    disguised by a unitriangular change of basis."""
    q = p**m
    r = n // 2
    E = [[0] * n for _ in range(n)]
    F = [[0] * n for _ in range(n)]
    for t in range(n):
        v = rng.randint(0, m)
        for k in range(n):
            if t < r:
                E[t][k] = rng.randrange(q) * p**v % q
        for i in range(n):
            F[i][t] = rng.randrange(q) * p ** (m - v) % q if t < r else rng.randrange(q)
    U = [[int(i == j) if i >= j else rng.randrange(q) for j in range(n)] for i in range(n)]
    # inverse of the unit upper-triangular U by back substitution
    Ui = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(n - 1, -1, -1):
        for j in range(i + 1, n):
            f = U[i][j]
            if f:
                Ui[i] = [(a - f * b) % q for a, b in zip(Ui[i], Ui[j])]
    mul = lambda A, B: [[sum(A[i][k] * B[k][j] for k in range(n)) % q for j in range(n)] for i in range(n)]
    return mul(U, E), mul(F, Ui)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--json", help="also write the rows as JSON")
    args = ap.parse_args(argv)
    if _zpm_core is None:
        print("compiled kernel not built; run: python3 setup.py build_ext --inplace", file=sys.stderr)
        return 1
    rng = random.Random(args.seed)
    rows = []
    print(f"{'p^m':>6} {'n':>5} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for p, m, n in CASES:
        d_in, d_out = composable(p, m, n, rng)
        want = _zpm.homology_exponents(d_in, d_out, n, p, m)
        got = _zpm_core.homology_exponents(d_in, d_out, n, p, m)
        if want != got:
            raise SystemExit(f"kernels disagree at p={p} m={m} n={n}: {want} vs {got}")
        t_py = min(timeit.repeat(lambda: _zpm.homology_exponents(d_in, d_out, n, p, m),
                                 number=1, repeat=args.repeat))
        t_c = min(timeit.repeat(lambda: _zpm_core.homology_exponents(d_in, d_out, n, p, m),
                                number=1, repeat=args.repeat))
        rows.append({"p": p, "m": m, "n": n, "python_s": t_py, "compiled_s": t_c, "speedup": t_py / t_c})
        print(f"{p ** m:>6} {n:>5} {t_py * 1e3:>10.2f} {t_c * 1e3:>12.3f} {t_py / t_c:>7.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
            fh.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
