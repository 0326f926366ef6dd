"""Named numerical verification suites.

Each suite returns rows with the fields in :data:`FIELDS`; ``measured`` and
``budget`` are compared as ``measured <= budget``.
"""
import math

import numpy as np

from . import expsums
from .asymptotics import weight_removal_check
from .representation import rep_single_bruteforce
from .special import KTuple

FIELDS = ["suite", "case", "measured", "budget", "passed", "anchor"]

ANCHORS = {
    "identity": "identity: multilinear split of prod(x_j + y_j) into main, single-y and multi-y parts",
    "laplace": "laplace: truncated inverse Laplace transform of z^-mu against n^(mu-1) e^(-n/N) / Gamma(mu)",
    "mtsum": "mtsum: smoothed short sum of n^lambda against H N^lambda / e",
    "ubound": "ubound: |U(alpha, H)| <= min(H, 1/|alpha|)",
    "zbound": "zbound: |z|^-1 <= pi min(N, 1/(2 pi |alpha|))",
    "supnorm": "supnorm: |S(alpha)| / N^(1/k) <= 2, maximal at alpha = 0",
    "reconstruct": "reconstruct: R(n; k) as exp(n/N) times a Fourier coefficient of prod S",
    "parseval": "parseval: sampled mean of |S|^2 equals the sum of squared coefficients",
    "pnt": "pnt: S(0) / (gamma_k N^(1/k)) within [0.95, 1.05]",
    "weight": "weight: removing exp(-n/N) from the window sum costs O(H^2 N^(rho-2))",
}
SUITES = tuple(ANCHORS)


def _row(suite, case, measured, budget, passed=None):
    measured, budget = float(measured), float(budget)
    if passed is None:
        passed = measured <= budget
    return {"suite": suite, "case": case, "measured": measured,
            "budget": budget, "passed": bool(passed), "anchor": ANCHORS[suite]}


def suite_identity(seed=0, workers=1, instances=100):
    rows = []
    for r in range(2, 7):
        coef = expsums.decomposition_coefficients(r)
        expected = {s: 1 - s for s in range(2, r + 1)}
        mismatch = sum(abs(coef[s] - expected[s]) for s in expected)
        rows.append(_row("identity", f"coefficients r={r}", mismatch, 0.0))
    rng = np.random.default_rng(seed)
    for r in range(3, 7):
        for i in range(instances):
            # points in the unit disk keep every monomial at most 1
            mod = np.sqrt(rng.random((2, r)))
            arg = 2 * np.pi * rng.random((2, r))
            x, y = mod * np.exp(1j * arg)
            res = expsums.decomposition_residual(x, y)
            scale = max(1.0, abs(np.prod(x + y)))
            rows.append(_row("identity", f"r={r} instance={i}", res,
                             1e-12 * scale))
    return rows


def suite_laplace(seed=0, workers=1):
    rows = []
    for mu in (0.5, 1.0, 1.5, 2.5):
        for x_half in (0.25, 0.5):
            for n in (500, 1000, 2000):
                c = expsums.laplace_check(1000, n, mu, x_half)
                rows.append(_row("laplace", f"N=1000 mu={mu} X={x_half} n={n}",
                                 c.gap, c.bound + c.quad_budget))
    return rows


def suite_mtsum(seed=0, workers=1):
    rows = []
    big_n = 10**5
    for lam in (-0.5, 0.0, 0.5, 1.5):
        for h in (100, 1000):
            c = expsums.mt_sum_check(big_n, h, lam)
            rows.append(_row("mtsum", f"N={big_n} H={h} lambda={lam}",
                             c.gap, c.budget))
    for h in (100, 1000):
        exact = expsums.mt_sum_check(big_n, h, 0.0).exact_sum
        closed = expsums.mt_geometric(big_n, h)
        rows.append(_row("mtsum", f"geometric N={big_n} H={h}",
                         abs(exact - closed) / closed, 1e-12))
    return rows


def suite_ubound(seed=0, workers=1):
    rows = []
    for h in (1000, 1001, 10**4):
        c = expsums.check_u_bound(h, 10**4)
        rows.append(_row("ubound", f"H={h} grid=10000", c.max_ratio, 1.0,
                         c.passed))
    return rows


def suite_zbound(seed=0, workers=1):
    rows = []
    for big_n in (10**3, 10**6):
        c = expsums.check_z_bound(big_n, 10**4)
        rows.append(_row("zbound", f"N={big_n} grid=10000", c.max_ratio, 1.0,
                         c.passed))
    return rows


def suite_supnorm(seed=0, workers=1):
    rows = []
    for big_n, k in ((10**6, 2), (10**6, 3)):
        ctx = expsums.ExpSumContext.build(big_n, k)
        c = expsums.s_tilde_sup_check(ctx, 10**4, workers=workers)
        rows.append(_row("supnorm", f"N={big_n} k={k} argmax={c.argmax_alpha!r}",
                         c.sup_ratio, 2.0, c.passed))
    return rows


def suite_reconstruct(seed=0, workers=1):
    ktuple = KTuple((2, 2, 2))
    ns = list(range(1, 61))
    got = expsums.reconstruct_r_via_integral(100, ns, ktuple)
    rows = []
    for n, value in zip(ns, got):
        oracle = rep_single_bruteforce(n, ktuple)
        rows.append(_row("reconstruct", f"N=100 k=2,2,2 n={n}",
                         abs(value - oracle), 1e-8))
    return rows


def suite_parseval(seed=0, workers=1):
    ctx = expsums.ExpSumContext.build(10**4, 2)
    _, _, rel = expsums.parseval_check(ctx)
    return [_row("parseval", "N=10000 k=2", rel, 1e-8)]


def suite_pnt(seed=0, workers=1):
    rows = []
    for k in (2, 3):
        ratio = expsums.pnt_ratio(expsums.ExpSumContext.build(10**8, k))
        rows.append(_row("pnt", f"N=100000000 k={k}", abs(ratio - 1.0), 0.05))
    return rows


def suite_weight(seed=0, workers=1):
    rows = []
    for big_n, h in ((10**4, 10**2), (10**6, 10**3)):
        gap, budget, ok = weight_removal_check(big_n, h, KTuple((2, 2, 2)))
        rows.append(_row("weight", f"N={big_n} H={h} k=2,2,2", gap, budget, ok))
    return rows


_RUNNERS = {
    "identity": suite_identity,
    "laplace": suite_laplace,
    "mtsum": suite_mtsum,
    "ubound": suite_ubound,
    "zbound": suite_zbound,
    "supnorm": suite_supnorm,
    "reconstruct": suite_reconstruct,
    "parseval": suite_parseval,
    "pnt": suite_pnt,
    "weight": suite_weight,
}


def run_suites(names, seed=0, workers=1):
    """Run suites in the canonical order; ``"all"`` selects every suite."""
    if "all" in names:
        names = SUITES
    unknown = set(names) - set(SUITES)
    if unknown:
        raise ValueError(f"unknown suite(s): {sorted(unknown)}")
    rows = []
    for name in SUITES:
        if name in names:
            rows.extend(_RUNNERS[name](seed=seed, workers=workers))
    return rows


def summarize(rows):
    worst = {}
    for r in rows:
        ratio = r["measured"] / r["budget"] if r["budget"] > 0 else (
            0.0 if r["measured"] == 0 else math.inf)
        worst[r["suite"]] = max(worst.get(r["suite"], 0.0), ratio)
    passed = sum(r["passed"] for r in rows)
    return {
        "total": len(rows),
        "passed": passed,
        "failed": len(rows) - passed,
        "worst_ratio": {k: (v if math.isfinite(v) else None)
                        for k, v in worst.items()},
    }
