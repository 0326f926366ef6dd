"""Smoothed prime-power exponential sums and numerical lemma checks.

The central object is

    S(alpha) = sum_{n >= 1} Lambda(n) exp(-n^k / N) e(n^k alpha),

truncated at ``n_max = ceil((tau N)^(1/k))`` where the smoothing weight is
below ``exp(-tau)``.  Phases ``n^k alpha mod 1`` are reduced exactly for the
leading bits of ``alpha`` (see ``_kernels_py._phase_parts``), so large
frequencies do not lose accuracy.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels
from .arith import integer_kth_root, sieve_lambda
from .special import KTuple, gamma_k, gamma_real, z_power_neg_mu, z_value

DEFAULT_TRUNC_TAU = 50.0
BUDGET_CONSTANT = 5.0
#: Points per work item when evaluating S on long alpha grids.
GRID_CHUNK = 4096


class QuadratureError(RuntimeError):
    """Refining the panel count changed the result by more than allowed."""


class SamplingError(ValueError):
    """Too few sample points to recover a Fourier coefficient exactly."""


@dataclass(frozen=True, eq=False)
class ExpSumContext:
    """Parameters fixing a truncated smoothed exponential sum.

    Use :meth:`build` to sieve an adequate von Mangoldt table.
    """

    N: int
    k: int
    lambda_table: object
    trunc_tau: float = DEFAULT_TRUNC_TAU
    n_vals: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.N < 1 or self.k < 1:
            raise ValueError("need N >= 1 and k >= 1")
        if self.lambda_table.limit < self.n_max:
            raise ValueError(
                f"Lambda table reaches {self.lambda_table.limit}, "
                f"need {self.n_max}")
        m, logs = self.lambda_table.prime_powers(self.n_max)
        weights = logs * np.exp(-(m.astype(np.float64) ** self.k) / self.N)
        object.__setattr__(self, "n_vals", m)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def build(cls, big_n, k, trunc_tau=DEFAULT_TRUNC_TAU, table=None):
        n_max = truncation_index(big_n, k, trunc_tau)
        if table is None or table.limit < n_max:
            table = sieve_lambda(max(n_max, 2))
        return cls(int(big_n), int(k), table, trunc_tau)

    @property
    def n_max(self):
        return truncation_index(self.N, self.k, self.trunc_tau)

    @property
    def max_frequency(self):
        return self.n_max ** self.k


def truncation_index(big_n, k, trunc_tau=DEFAULT_TRUNC_TAU):
    """Smallest n with n^k >= tau N."""
    target = trunc_tau * big_n
    r = integer_kth_root(math.ceil(target), k)
    return r if r ** k >= target else r + 1


def truncation_tail(ctx, extent=2):
    """Numerical size of the dropped tail over ``n_max < n <= extent n_max``."""
    hi = extent * ctx.n_max
    table = sieve_lambda(hi) if ctx.lambda_table.limit < hi else ctx.lambda_table
    m, logs = table.prime_powers(hi)
    keep = m > ctx.n_max
    return float(np.sum(logs[keep] * np.exp(-(m[keep].astype(float) ** ctx.k)
                                            / ctx.N)))


def s_tilde(ctx, alpha, workers=1):
    """S(alpha) at a scalar or an array of points."""
    scalar = np.ndim(alpha) == 0
    al = np.atleast_1d(np.asarray(alpha, dtype=np.float64)).ravel()
    chunks = [al[i:i + GRID_CHUNK] for i in range(0, al.size, GRID_CHUNK)]

    def run(chunk):
        return kernels.s_tilde_points(chunk, ctx.n_vals, ctx.weights, ctx.k)

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    out = np.concatenate(parts) if parts else np.zeros(0, complex)
    if scalar:
        return complex(out[0])
    return out.reshape(np.shape(alpha))


def s_tilde_grid(ctx, m):
    """S(j/m) for j = 0..m-1 with exact integer phase reduction."""
    return kernels.s_tilde_grid(int(m), ctx.n_vals, ctx.weights, ctx.k)


def u_sum(alpha, h):
    """U(alpha, H) = sum_{m=1}^{H} e(m alpha), via the Dirichlet kernel.

    Uses e((H+1) alpha / 2) sin(pi H alpha) / sin(pi alpha), with the
    series of the sine ratio when alpha is within 1e-5 / H of an integer.
    """
    if h < 1:
        raise ValueError("H must be >= 1")
    a = np.asarray(alpha, dtype=np.float64)
    frac = a - np.rint(a)
    # close to an integer the sine ratio underflows; use its series there
    near = np.abs(frac) * h < 1e-5
    safe = np.where(near, 0.5, frac)
    ratio = np.where(
        near,
        h * (1.0 - (np.pi * frac) ** 2 * (h * h - 1.0) / 6.0),
        np.sin(np.pi * h * safe) / np.sin(np.pi * safe))
    half = (h + 1) * frac / 2.0
    val = np.exp(2j * np.pi * (half - np.floor(half))) * ratio
    return complex(val) if val.ndim == 0 else val


def e_tilde(ctx, alpha, workers=1):
    """S(alpha) - gamma_k z^(-1/k)."""
    main = gamma_k(ctx.k) * z_power_neg_mu(z_value(ctx.N, alpha), 1.0 / ctx.k)
    return s_tilde(ctx, alpha, workers) - main


@dataclass(frozen=True)
class GridCheck:
    passed: bool
    max_ratio: float
    failures: tuple = ()


def _grid(grid_size):
    return np.union1d(np.linspace(-0.5, 0.5, int(grid_size)), [0.0])


def check_u_bound(h, grid_size, rtol=1e-12):
    """|U(alpha, H)| <= min(H, 1/|alpha|) on a grid over [-1/2, 1/2]."""
    alphas = _grid(grid_size)
    with np.errstate(divide="ignore"):
        bound = np.minimum(h, 1.0 / np.abs(alphas))
    ratio = np.abs(u_sum(alphas, h)) / bound
    bad = alphas[ratio > 1.0 + rtol]
    return GridCheck(bad.size == 0, float(ratio.max()), tuple(bad.tolist()))


def check_z_bound(big_n, grid_size, rtol=1e-12):
    """|z|^-1 <= pi min(N, 1/(2 pi |alpha|)) on a grid over [-1/2, 1/2]."""
    alphas = _grid(grid_size)
    with np.errstate(divide="ignore"):
        bound = np.pi * np.minimum(big_n, 1.0 / (2.0 * np.pi * np.abs(alphas)))
    ratio = (1.0 / np.abs(z_value(big_n, alphas))) / bound
    bad = alphas[ratio > 1.0 + rtol]
    return GridCheck(bad.size == 0, float(ratio.max()), tuple(bad.tolist()))


@dataclass(frozen=True)
class SupCheck:
    sup_ratio: float
    argmax_alpha: float
    ratio_at_zero: float
    passed: bool


def s_tilde_sup_check(ctx, grid_size, workers=1, ceiling=2.0):
    """Largest |S(alpha)| / N^(1/k) over a grid; must be <= 2 and at 0."""
    alphas = _grid(grid_size)
    ratio = np.abs(s_tilde(ctx, alphas, workers)) / ctx.N ** (1.0 / ctx.k)
    i = int(np.argmax(ratio))
    at_zero = float(ratio[np.searchsorted(alphas, 0.0)])
    sup = float(ratio[i])
    return SupCheck(sup, float(alphas[i]), at_zero,
                    sup <= ceiling and alphas[i] == 0.0)


def pnt_ratio(ctx):
    """S(0) / (gamma_k N^(1/k))."""
    return s_tilde(ctx, 0.0).real / (gamma_k(ctx.k) * ctx.N ** (1.0 / ctx.k))


# -- quadrature ------------------------------------------------------------

@dataclass(frozen=True)
class QuadSpec:
    """Composite quadrature sized by the integrand's highest frequency.

    The panel count on an interval of width ``w`` is
    ``max(64, ceil(max_frequency * w) * panels_per_period)``.
    """

    max_frequency: float
    panels_per_period: int = 8
    rule: str = "gauss-legendre"
    nodes: int = 8

    def __post_init__(self):
        if self.panels_per_period < 8:
            raise ValueError("panels_per_period must be >= 8")
        if self.rule not in ("gauss-legendre", "simpson"):
            raise ValueError(f"unknown rule {self.rule!r}")

    def panels(self, width):
        return max(64, math.ceil(self.max_frequency * width)
                   * self.panels_per_period)


def _composite(f, a, b, panels, spec):
    edges = np.linspace(a, b, panels + 1)
    if spec.rule == "simpson":
        x = np.linspace(a, b, 2 * panels + 1)
        w = np.full(x.size, 2.0)
        w[1::2] = 4.0
        w[0] = w[-1] = 1.0
        return complex(np.dot(w, f(x)) * (b - a) / (6.0 * panels))
    t, wt = np.polynomial.legendre.leggauss(spec.nodes)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    vals = f(x).reshape(panels, spec.nodes)
    return complex(np.sum((vals @ wt) * half))


def integrate(f, a, b, spec, panels=None, rtol=None, atol=0.0):
    """Integrate ``f`` over [a, b]; returns ``(value, error_estimate)``.

    The estimate is the change when the panel count is doubled.

    Raises:
        QuadratureError: if ``rtol`` is given and the estimate exceeds
            ``atol + rtol * |value|``.
    """
    if b <= a:
        return 0j, 0.0
    p = panels or spec.panels(b - a)
    coarse = _composite(f, a, b, p, spec)
    fine = _composite(f, a, b, 2 * p, spec)
    err = abs(fine - coarse)
    if rtol is not None and err > atol + rtol * abs(fine):
        raise QuadratureError(
            f"quadrature on [{a}, {b}] did not settle: change {err:.3g}")
    return fine, err


@dataclass(frozen=True)
class LaplaceCheck:
    quad_value: complex
    closed_form: float
    gap: float
    quad_budget: float
    bound: float
    passed: bool


def laplace_check(big_n, n, mu, x_half, quad=None):
    """Quadrature of z^(-mu) e(-n alpha) over [-X, X] against its limit.

    The closed form is exp(-n/N) n^(mu-1) / Gamma(mu); the allowed gap is
    ``5 / (n X^mu)`` plus the quadrature error estimate.
    """
    if quad is None:
        quad = QuadSpec(max_frequency=max(n, big_n))

    def f(a):
        return z_power_neg_mu(z_value(big_n, a), mu) * np.exp(-2j * np.pi * n * a)

    val, err = integrate(f, -x_half, x_half, quad, rtol=1e-6, atol=1e-9)
    closed = math.exp(-n / big_n) * n ** (mu - 1.0) / gamma_real(mu)
    gap = abs(val - closed)
    bound = BUDGET_CONSTANT / (n * x_half ** mu)
    budget = 10.0 * err + 1e-9
    return LaplaceCheck(val, closed, gap, budget, bound, gap <= bound + budget)


@dataclass(frozen=True)
class MtSumCheck:
    exact_sum: float
    approx: float
    gap: float
    budget: float
    passed: bool


def mt_sum_check(big_n, h, lam):
    """sum_{N<n<=N+H} exp(-n/N) n^lam against H N^lam / e."""
    if not 1 <= h <= big_n:
        raise ValueError("need 1 <= H <= N")
    n = np.arange(big_n + 1, big_n + h + 1, dtype=np.float64)
    exact = math.fsum((np.exp(-n / big_n) * n ** lam).tolist())
    approx = h * float(big_n) ** lam / math.e
    gap = abs(exact - approx)
    budget = BUDGET_CONSTANT * h * h * float(big_n) ** (lam - 1.0)
    return MtSumCheck(exact, approx, gap, budget, gap <= budget)


def mt_geometric(big_n, h):
    """Closed form of sum_{N<n<=N+H} exp(-n/N)."""
    return math.exp(-(big_n + 1) / big_n) * math.expm1(-h / big_n) / math.expm1(-1.0 / big_n)


# -- L2 diagnostics --------------------------------------------------------

def _l2_integral(fn, ctx, half_width, samples):
    if half_width <= 0:
        return 0.0
    spec = QuadSpec(max_frequency=ctx.max_frequency)
    panels = None
    if samples:
        panels = max(1, math.ceil(samples / (2 * spec.nodes)))
    val, _ = integrate(lambda a: np.abs(fn(ctx, a)) ** 2, -half_width,
                       half_width, spec, panels=panels)
    return val.real


def l2_e_tilde(ctx, xi, samples=None):
    """Quadrature estimate of the integral of |S - gamma_k z^(-1/k)|^2 on [-xi, xi]."""
    if not 0 <= xi <= 0.5:
        raise ValueError("xi must lie in [0, 1/2]")
    return _l2_integral(e_tilde, ctx, xi, samples)


def l2_s_tilde(ctx, tau, samples=None):
    """Quadrature estimate of the integral of |S|^2 on [-tau, tau]."""
    if not 0 <= tau <= 0.5:
        raise ValueError("tau must lie in [0, 1/2]")
    return _l2_integral(s_tilde, ctx, tau, samples)


def l2_s_tilde_exact(ctx, tau):
    """Closed-form double sum for the integral of |S|^2 on [-tau, tau]."""
    t = ctx.n_vals.astype(np.float64) ** ctx.k
    d = t[:, None] - t[None, :]
    kern = np.where(d == 0, 2.0 * tau,
                    np.sin(2.0 * np.pi * tau * d) / (np.pi * np.where(d == 0, 1.0, d)))
    return float(ctx.weights @ kern @ ctx.weights)


def rh_l2_shape(big_n, k, xi):
    """N^(1/k) xi (log N)^2."""
    return big_n ** (1.0 / k) * xi * math.log(big_n) ** 2


def tolev_shape(big_n, k, tau):
    """(tau N^(1/k) + N^(2/k - 1)) (log N)^3."""
    return (tau * big_n ** (1.0 / k) + big_n ** (2.0 / k - 1.0)) * math.log(big_n) ** 3


def parseval_check(ctx, m=None):
    """Mean of |S(j/M)|^2 against sum Lambda(n)^2 exp(-2 n^k / N).

    ``M`` defaults to twice the highest frequency plus one.
    """
    m = int(m or 2 * ctx.max_frequency + 1)
    vals = s_tilde_grid(ctx, m)
    sampled = math.fsum((np.abs(vals) ** 2).tolist()) / m
    exact = math.fsum((ctx.weights ** 2).tolist())
    return sampled, exact, abs(sampled - exact) / exact


# -- combinatorial decomposition ------------------------------------------

def _expand(factors, r):
    # factors: list of dicts {bitmask of y-positions: coefficient}
    poly = {0: 1}
    for f in factors:
        nxt = {}
        for m1, c1 in poly.items():
            for m2, c2 in f.items():
                if m1 & m2:
                    raise AssertionError("repeated variable index")
                nxt[m1 | m2] = nxt.get(m1 | m2, 0) + c1 * c2
        poly = nxt
    return poly


def decomposition_coefficients(r):
    """Coefficients of the multi-y part of prod(x_j + y_j).

    Expands prod(x_j + y_j) - prod(x_j) - sum_i y_i prod_{j != i}(x_j + y_j)
    in the monomials x_{I^c} y_I and returns ``{|I|: c}``, after checking
    that the coefficient depends on ``I`` only through ``|I|`` and that
    the one-y monomials cancel.
    """
    if not 2 <= r <= 12:
        raise ValueError("r must lie in 2..12")

    def s_factor(j):
        return {0: 1, 1 << j: 1}

    full = _expand([s_factor(j) for j in range(r)], r)
    total = dict(full)
    total[0] = total.get(0, 0) - 1
    for i in range(r):
        term = _expand([{1 << i: 1}] + [s_factor(j) for j in range(r) if j != i], r)
        for mask, c in term.items():
            total[mask] = total.get(mask, 0) - c
    by_size = {}
    for mask, c in total.items():
        size = bin(mask).count("1")
        if size < 2:
            if c != 0:
                raise AssertionError(f"monomial {mask:b} does not cancel")
            continue
        if by_size.setdefault(size, c) != c:
            raise AssertionError(f"coefficient of size {size} is not uniform")
    return dict(sorted(by_size.items()))


def decomposition_parts(x, y):
    """Return ``(prod S, prod x, A, B)`` for S_j = x_j + y_j."""
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d sequences of equal length")
    r = x.size
    if r < 2:
        raise ValueError("need r >= 2")
    s = x + y
    coef = decomposition_coefficients(r)
    part_a = sum(y[i] * np.prod(np.delete(s, i)) for i in range(r))
    part_b = 0j
    idx = range(r)
    for size in range(2, r + 1):
        for subset in combinations(idx, size):
            mask = np.zeros(r, dtype=bool)
            mask[list(subset)] = True
            part_b += coef[size] * np.prod(x[~mask]) * np.prod(y[mask])
    return complex(np.prod(s)), complex(np.prod(x)), complex(part_a), complex(part_b)


def decomposition_residual(x, y):
    """|prod(x+y) - prod x - A - B|."""
    prod_s, prod_x, part_a, part_b = decomposition_parts(x, y)
    return abs(prod_s - prod_x - part_a - part_b)


# -- coefficient extraction -------------------------------------------------

def reconstruct_r_via_integral(big_n, n, ktuple, m=None,
                               trunc_tau=DEFAULT_TRUNC_TAU, table=None):
    """R(n; k) recovered as exp(n/N) times a Fourier coefficient.

    The truncated product of the smoothed sums is a trigonometric
    polynomial with frequencies in ``[0, F]``; averaging it against
    e(-n j/M) over ``M > F`` equispaced points returns its n-th coefficient
    exactly.  ``n`` may be an integer or a sequence.

    Raises:
        SamplingError: if ``m <= F``.
        ValueError: if some ``n`` exceeds ``tau N`` (truncation would drop
            representations).
    """
    if not isinstance(ktuple, KTuple):
        ktuple = KTuple(tuple(ktuple))
    ns = np.atleast_1d(np.asarray(n, dtype=np.int64))
    if ns.size and (ns.min() < 0 or ns.max() > trunc_tau * big_n):
        raise ValueError("n must lie in [0, tau N]")
    ctxs = {}
    for k in set(ktuple.exponents):
        ctxs[k] = ExpSumContext.build(big_n, k, trunc_tau, table)
        table = ctxs[k].lambda_table
    freq = sum(ctxs[k].max_frequency for k in ktuple.exponents)
    m = int(m or freq + 1)
    if m <= freq:
        raise SamplingError(f"need more than {freq} samples, got {m}")
    grids = {k: s_tilde_grid(c, m) for k, c in ctxs.items()}
    prod = np.ones(m, dtype=np.complex128)
    for k in ktuple.exponents:
        prod *= grids[k]
    roots = np.exp(-2j * np.pi * np.arange(m) / m)
    j = np.arange(m, dtype=np.int64)
    out = np.empty(ns.size)
    for i, nn in enumerate(ns.tolist()):
        coeff = np.dot(prod, roots[(nn % m) * j % m]) / m
        out[i] = math.exp(nn / big_n) * coeff.real
    return float(out[0]) if np.ndim(n) == 0 else out


def restricted_range_integral(big_n, h, b_cut, ktuple, trunc_tau=DEFAULT_TRUNC_TAU,
                              panels=None):
    """Integral of prod S_kj(alpha) U(-alpha, H) e(-N alpha) over |alpha| >= B/H.

    Optional diagnostic for the part of the unit interval away from 0.
    """
    if not isinstance(ktuple, KTuple):
        ktuple = KTuple(tuple(ktuple))
    cut = b_cut / h
    if cut >= 0.5:
        return 0j
    ctxs = {}
    table = None
    for k in set(ktuple.exponents):
        ctxs[k] = ExpSumContext.build(big_n, k, trunc_tau, table)
        table = ctxs[k].lambda_table
    freq = sum(ctxs[k].max_frequency for k in ktuple.exponents) + big_n + h

    def f(a):
        vals = {k: s_tilde(c, a) for k, c in ctxs.items()}
        p = np.ones(a.shape, dtype=np.complex128)
        for k in ktuple.exponents:
            p *= vals[k]
        return p * u_sum(-a, h) * np.exp(-2j * np.pi * big_n * a)

    spec = QuadSpec(max_frequency=freq)
    left, _ = integrate(f, -0.5, -cut, spec, panels=panels)
    right, _ = integrate(f, cut, 0.5, spec, panels=panels)
    return left + right
