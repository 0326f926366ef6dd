"""Pure Python / numpy implementations of the hot kernels.

Mirrors ``_kernels.pyx`` function by function; used when the compiled
extension is unavailable or ``PPRA_PURE_PYTHON`` is set.
"""
import math

import numpy as np

_TWO20 = 1 << 20
_TWO40 = 1 << 40
_MASK20 = _TWO20 - 1
_MASK40 = _TWO40 - 1


def iroot(t, k):
    """Exact floor of the k-th root of a non-negative integer."""
    if t < 2 or k == 1:
        return t
    r = int(round(t ** (1.0 / k)))
    while r ** k > t:
        r -= 1
    while (r + 1) ** k <= t:
        r += 1
    return r


def sieve_lambda(limit):
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    primes = np.flatnonzero(is_prime)
    values = np.zeros(limit + 1, dtype=np.float64)
    logs = np.log(primes.astype(np.float64))
    power = primes.copy()
    while power.size:
        values[power] = logs
        keep = power <= limit // primes
        primes, logs = primes[keep], logs[keep]
        power = power[keep] * primes
    return values


def _phase_parts(alpha):
    # alpha = a1 / 2^20 + a2 / 2^40 + rest with |rest| <= 2^-41
    a1 = np.rint(alpha * _TWO20)
    rem = alpha - a1 / _TWO20
    a2 = np.rint(rem * _TWO40)
    rest = rem - a2 / _TWO40
    return a1.astype(np.int64), a2.astype(np.int64), rest


def _frac_phase(t, a1, a2, rest):
    # fractional part of t * alpha; the dyadic parts are reduced exactly
    hi = ((t & _MASK20) * (a1 & _MASK20)) & _MASK20
    mid = ((t & _MASK40) * np.abs(a2)) & _MASK40
    frac = hi / _TWO20 + np.sign(a2) * (mid / _TWO40) + float(t) * rest
    return frac - np.floor(frac)


def s_tilde_points(alphas, n_vals, weights, k):
    alphas = np.ascontiguousarray(alphas, dtype=np.float64)
    a1, a2, rest = _phase_parts(alphas)
    out = np.zeros(alphas.shape, dtype=np.complex128)
    for n, w in zip(n_vals.tolist(), weights.tolist()):
        t = n ** k
        frac = _frac_phase(t, a1, a2, rest)
        out += w * np.exp(2j * np.pi * frac)
    return out


def s_tilde_grid(m, n_vals, weights, k):
    roots = np.exp(2j * np.pi * np.arange(m) / m)
    j = np.arange(m, dtype=np.int64)
    out = np.zeros(m, dtype=np.complex128)
    for n, w in zip(n_vals.tolist(), weights.tolist()):
        step = pow(n, k, m)
        out += w * roots[(step * j) % m]
    return out


def _enumerate_prefix(budget, exps, pp_m, pp_log, depth, s, weight, visit):
    # walk prime-power tuples for coordinates depth..len(exps)-1
    k = exps[depth]
    for m, lg in zip(pp_m, pp_log):
        v = s + m ** k
        if v > budget:
            break
        if depth + 1 == len(exps):
            visit(v, weight * lg)
        else:
            _enumerate_prefix(budget, exps, pp_m, pp_log, depth + 1, v,
                              weight * lg, visit)


def bruteforce_rep(n, exps, pp_m, pp_log, lam):
    exps = [int(e) for e in exps]
    pp_m = [int(m) for m in pp_m]
    pp_log = [float(x) for x in pp_log]
    lam_len = len(lam)
    k_last = exps[-1]
    total = 0.0

    def visit(s, weight):
        nonlocal total
        rest = n - s
        if rest < 1:
            return
        m = iroot(rest, k_last)
        if m ** k_last == rest and m < lam_len and lam[m] > 0.0:
            total += weight * lam[m]

    if len(exps) == 1:
        visit(0, 1.0)
    else:
        _enumerate_prefix(n - 1, exps[:-1], pp_m, pp_log, 0, 0, 1.0, visit)
    return total


def window_partials(big_n, h, exps, pp_m, pp_log, lam, psi, lo, hi):
    """Per-first-coordinate partial sums of the raw and weighted windows.

    Entry ``i - lo`` covers tuples whose first coordinate is ``pp_m[i]``.
    """
    exps = [int(e) for e in exps]
    pp_m = [int(m) for m in pp_m]
    pp_log = [float(x) for x in pp_log]
    top = big_n + h
    k_last = exps[-1]
    raw = np.zeros(hi - lo)
    weighted = np.zeros(hi - lo)
    for i in range(lo, hi):
        acc = [0.0, 0.0]

        def visit(s, weight):
            upper = iroot(top - s, k_last)
            lower = iroot(big_n - s, k_last) if big_n > s else 0
            if upper <= lower:
                return
            acc[0] += weight * (psi[upper] - psi[lower])
            wsum = 0.0
            for m in range(lower + 1, upper + 1):
                if lam[m] > 0.0:
                    wsum += lam[m] * math.exp(-(s + m ** k_last) / big_n)
            acc[1] += weight * wsum

        s0 = pp_m[i] ** exps[0]
        if s0 >= top:
            continue
        if len(exps) == 2:
            visit(s0, pp_log[i])
        else:
            _enumerate_prefix(top - 1, exps[1:-1], pp_m, pp_log, 0, s0,
                              pp_log[i], visit)
        raw[i - lo], weighted[i - lo] = acc
    return raw, weighted
