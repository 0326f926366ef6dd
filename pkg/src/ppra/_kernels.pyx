# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; see ``_kernels_py`` for the reference versions."""
import builtins

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, exp, log, pow, floor, fabs, M_PI, nearbyint

cnp.import_array()

cdef enum:
    MAXR = 32

# ipow saturates here, so iroot_c is exact for every t < SATURATE
cdef long long SATURATE = 0x7FFFFFFFFFFFFFFF
cdef long long TWO20 = 1LL << 20
cdef long long TWO40 = 1LL << 40
cdef long long MASK20 = (1LL << 20) - 1
cdef long long MASK40 = (1LL << 40) - 1


cdef inline long long ipow(long long m, int k) noexcept nogil:
    cdef long long r = 1
    cdef int i
    for i in range(k):
        if m != 0 and r > SATURATE // m:
            return SATURATE
        r *= m
    return r


cdef inline long long iroot_c(long long t, int k) noexcept nogil:
    cdef long long r
    if t < 2 or k == 1:
        return t
    r = <long long>(pow(<double>t, 1.0 / k) + 0.5)
    while ipow(r, k) > t:
        r -= 1
    while ipow(r + 1, k) <= t:
        r += 1
    return r


def iroot(long long t, int k):
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == SATURATE:
        raise OverflowError("t must be below 2**63 - 1")
    return iroot_c(t, k)


def sieve_lambda(Py_ssize_t limit):
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] comp = np.zeros(limit + 1, dtype=np.uint8)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] values = np.zeros(limit + 1, dtype=np.float64)
    cdef unsigned char[::1] c = comp
    cdef double[::1] v = values
    cdef Py_ssize_t p, q, pk
    cdef double lg
    with nogil:
        p = 2
        while p * p <= limit:
            if not c[p]:
                q = p * p
                while q <= limit:
                    c[q] = 1
                    q += p
            p += 1
        for p in range(2, limit + 1):
            if c[p]:
                continue
            lg = log(<double>p)
            pk = p
            while True:
                v[pk] = lg
                if pk > limit // p:
                    break
                pk *= p
    return values


def s_tilde_points(alphas, n_vals, weights, int k):
    cdef const double[::1] al = np.ascontiguousarray(alphas, dtype=np.float64).ravel()
    cdef const long long[::1] nv = np.ascontiguousarray(n_vals, dtype=np.int64)
    cdef const double[::1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t na = al.shape[0], nn = nv.shape[0]
    out = np.zeros(na, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef long long[::1] tv = np.empty(nn, dtype=np.int64)
    cdef Py_ssize_t i, j
    cdef long long a1, a2, t, hi, mid, sgn
    cdef double alpha, rem, rest, frac, re, im, ang
    with nogil:
        for j in range(nn):
            tv[j] = ipow(nv[j], k)
        for i in range(na):
            alpha = al[i]
            a1 = <long long>nearbyint(alpha * TWO20)
            rem = alpha - (<double>a1) / TWO20
            a2 = <long long>nearbyint(rem * TWO40)
            rest = rem - (<double>a2) / TWO40
            sgn = 1 if a2 >= 0 else -1
            re = 0.0
            im = 0.0
            for j in range(nn):
                t = tv[j]
                hi = ((t & MASK20) * (a1 & MASK20)) & MASK20
                mid = ((t & MASK40) * (a2 * sgn)) & MASK40
                frac = (<double>hi) / TWO20 + sgn * ((<double>mid) / TWO40) + (<double>t) * rest
                frac = frac - floor(frac)
                ang = 2.0 * M_PI * frac
                re = re + wv[j] * cos(ang)
                im = im + wv[j] * sin(ang)
            o[i] = re + 1j * im
    return out.reshape(np.shape(alphas))


def s_tilde_grid(Py_ssize_t m, n_vals, weights, int k):
    cdef const long long[::1] nv = np.ascontiguousarray(n_vals, dtype=np.int64)
    cdef const double[::1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t nn = nv.shape[0]
    cdef double[::1] cr = np.cos(2.0 * np.pi * np.arange(m) / m)
    cdef double[::1] ci = np.sin(2.0 * np.pi * np.arange(m) / m)
    cdef double[::1] re = np.zeros(m)
    cdef double[::1] im = np.zeros(m)
    cdef long long[::1] steps = np.array([builtins.pow(int(n), k, m) for n in n_vals], dtype=np.int64)
    cdef Py_ssize_t j, q
    cdef long long idx, step
    cdef double w
    with nogil:
        for q in range(nn):
            step = steps[q]
            w = wv[q]
            idx = 0
            for j in range(m):
                re[j] += w * cr[idx]
                im[j] += w * ci[idx]
                idx += step
                if idx >= m:
                    idx -= m
    return np.asarray(re) + 1j * np.asarray(im)


cdef struct Ctx:
    int mode            # 0: single-n brute force, 1: window sums
    long long n         # target n (mode 0) or window start N (mode 1)
    long long top       # N + H (mode 1)
    int k_last
    const double* lam
    Py_ssize_t lam_len
    const double* psi
    double acc_raw
    double acc_weighted


cdef inline void _visit(Ctx* c, long long s, double weight) noexcept nogil:
    cdef long long rest, m, upper, lower
    cdef double wsum
    if c.mode == 0:
        rest = c.n - s
        if rest < 1:
            return
        m = iroot_c(rest, c.k_last)
        if ipow(m, c.k_last) == rest and m < c.lam_len and c.lam[m] > 0.0:
            c.acc_raw += weight * c.lam[m]
        return
    upper = iroot_c(c.top - s, c.k_last)
    lower = iroot_c(c.n - s, c.k_last) if c.n > s else 0
    if upper <= lower:
        return
    c.acc_raw += weight * (c.psi[upper] - c.psi[lower])
    wsum = 0.0
    for m in range(lower + 1, upper + 1):
        if c.lam[m] > 0.0:
            wsum += c.lam[m] * exp(-(<double>(s + ipow(m, c.k_last))) / c.n)
    c.acc_weighted += weight * wsum


cdef void _walk(Ctx* c, const long long* exps, int depth_n, long long budget,
                const long long* pp_m, const double* pp_log, Py_ssize_t n_pp,
                long long s0, double w0) noexcept nogil:
    # same visiting order as the recursive walk in _kernels_py
    cdef Py_ssize_t idx[MAXR]
    cdef long long sv[MAXR]
    cdef double wv[MAXR]
    cdef int d
    cdef long long v
    cdef double w
    if depth_n == 0:
        _visit(c, s0, w0)
        return
    sv[0] = s0
    wv[0] = w0
    idx[0] = 0
    d = 0
    while d >= 0:
        if idx[d] < n_pp:
            v = sv[d] + ipow(pp_m[idx[d]], <int>exps[d])
            if v <= budget:
                w = wv[d] * pp_log[idx[d]]
                if d + 1 == depth_n:
                    _visit(c, v, w)
                    idx[d] += 1
                else:
                    sv[d + 1] = v
                    wv[d + 1] = w
                    d += 1
                    idx[d] = 0
                continue
        d -= 1
        if d >= 0:
            idx[d] += 1


def bruteforce_rep(long long n, exps, pp_m, pp_log, lam):
    cdef const long long[::1] ex = np.ascontiguousarray(exps, dtype=np.int64)
    cdef const long long[::1] pm = np.ascontiguousarray(pp_m, dtype=np.int64)
    cdef const double[::1] pl = np.ascontiguousarray(pp_log, dtype=np.float64)
    cdef const double[::1] lm = np.ascontiguousarray(lam, dtype=np.float64)
    cdef int r = ex.shape[0]
    if r > MAXR:
        raise ValueError("too many exponents")
    cdef Ctx c
    c.mode = 0
    c.n = n
    c.top = 0
    c.k_last = <int>ex[r - 1]
    c.lam = &lm[0]
    c.lam_len = lm.shape[0]
    c.psi = NULL
    c.acc_raw = 0.0
    c.acc_weighted = 0.0
    with nogil:
        _walk(&c, &ex[0], r - 1, n - 1, &pm[0] if pm.shape[0] else NULL,
              &pl[0] if pl.shape[0] else NULL, pm.shape[0], 0, 1.0)
    return c.acc_raw


def window_partials(long long big_n, long long h, exps, pp_m, pp_log, lam, psi,
                    Py_ssize_t lo, Py_ssize_t hi):
    cdef const long long[::1] ex = np.ascontiguousarray(exps, dtype=np.int64)
    cdef const long long[::1] pm = np.ascontiguousarray(pp_m, dtype=np.int64)
    cdef const double[::1] pl = np.ascontiguousarray(pp_log, dtype=np.float64)
    cdef const double[::1] lm = np.ascontiguousarray(lam, dtype=np.float64)
    cdef const double[::1] ps = np.ascontiguousarray(psi, dtype=np.float64)
    cdef int r = ex.shape[0]
    if r > MAXR or r < 2:
        raise ValueError("window kernel needs 2 <= r <= 32")
    raw = np.zeros(hi - lo)
    weighted = np.zeros(hi - lo)
    cdef double[::1] rv = raw
    cdef double[::1] wvv = weighted
    cdef long long top = big_n + h
    cdef long long s0
    cdef Py_ssize_t i
    cdef Ctx c
    c.mode = 1
    c.n = big_n
    c.top = top
    c.k_last = <int>ex[r - 1]
    c.lam = &lm[0]
    c.lam_len = lm.shape[0]
    c.psi = &ps[0]
    with nogil:
        for i in range(lo, hi):
            c.acc_raw = 0.0
            c.acc_weighted = 0.0
            s0 = ipow(pm[i], <int>ex[0])
            if s0 >= top:
                continue
            if r == 2:
                _visit(&c, s0, pl[i])
            else:
                _walk(&c, &ex[1], r - 2, top - 1, &pm[0], &pl[0], pm.shape[0],
                      s0, pl[i])
            rv[i - lo] = c.acc_raw
            wvv[i - lo] = c.acc_weighted
    return raw, weighted
