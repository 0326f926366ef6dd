"""Time the compiled kernels against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each case runs both backends on identical inputs, checks that the outputs
agree, and prints the best wall time of ``--repeat`` runs.
"""
import argparse
import time

import numpy as np

from ppra import kernels
from ppra.arith import psi_prefix, sieve_lambda


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _cases(quick):
    scale = 10 if quick else 1
    table = sieve_lambda(20000)
    pp_m, pp_log = table.prime_powers()
    psi = psi_prefix(sieve_lambda(4000))
    w_m, w_log = psi.table.prime_powers()
    exps3 = np.array([2, 2, 2], dtype=np.int64)
    small_m, small_log = sieve_lambda(100).prime_powers()
    alphas = np.linspace(-0.5, 0.5, 2001 // scale)

    yield ("sieve_lambda(2e6)",
           lambda k: k.sieve_lambda(2_000_000 // scale))
    yield ("s_tilde_points k=2, 2e3 points",
           lambda k: k.s_tilde_points(alphas, pp_m, pp_log, 2))
    yield ("s_tilde_grid k=2, M=2e5",
           lambda k: k.s_tilde_grid(200_000 // scale, pp_m[:200], pp_log[:200], 2))
    yield ("bruteforce_rep (2,2,2), n<=3000 step 3",
           lambda k: [k.bruteforce_rep(n, exps3, small_m, small_log, table.values)
                      for n in range(0, 3000 // scale, 3)])
    yield ("window_partials (2,2,2), N=1e7, H=2e4",
           lambda k: k.window_partials(10**7 // scale, 20000 // scale, exps3, w_m,
                                       w_log, psi.table.values, psi.cumulative,
                                       0, w_m.size))


def _agree(a, b):
    if isinstance(a, tuple):
        return all(_agree(x, y) for x, y in zip(a, b))
    return np.allclose(np.asarray(a), np.asarray(b), rtol=1e-12, atol=1e-9)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--quick", action="store_true",
                        help="shrink every case tenfold")
    args = parser.parse_args(argv)
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the fallback will be timed")
    names = sorted(backends)
    print(f"{'case':<42}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for label, fn in _cases(args.quick):
        times, outs = {}, {}
        for name in names:
            times[name], outs[name] = _best(lambda: fn(backends[name]), args.repeat)
        if len(outs) == 2 and not _agree(outs["cython"], outs["python"]):
            raise SystemExit(f"backends disagree on {label}")
        speed = (f"{times['python'] / times['cython']:>9.1f}x"
                 if "cython" in times else f"{'-':>10}")
        print(f"{label:<42}" + "".join(f"{times[n]:>11.4f}s" for n in names) + speed)


if __name__ == "__main__":
    main()
