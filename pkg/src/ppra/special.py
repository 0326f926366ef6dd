"""Gamma function, exponent tuples and the complex smoothing parameter z."""
import math
from dataclasses import dataclass

import numpy as np

# Lanczos approximation, g = 7, nine terms
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
GAMMA_MAX_ARG = 50.0


def gamma_real(x):
    """Euler Gamma function for real ``0 < x <= 50``.

    Uses the g = 7 Lanczos series for ``x >= 1/2`` and the reflection
    formula below that.  Relative error is below 1e-13 on (0.5, 20].
    """
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"gamma_real needs x > 0, got {x}")
    if x > GAMMA_MAX_ARG:
        raise ValueError(f"gamma_real is limited to x <= {GAMMA_MAX_ARG}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_real(1.0 - x))
    x -= 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (x + i)
    t = x + _LANCZOS_G + 0.5
    return _SQRT_2PI * t ** (x + 0.5) * math.exp(-t) * acc


def gamma_k(k):
    """Gamma(1 + 1/k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return gamma_real(1.0 + 1.0 / k)


@dataclass(frozen=True)
class KTuple:
    """Exponents ``(k_1, ..., k_r)`` of a prime-power representation problem.

    Exponents are stored sorted; every exponent must be at least 2.
    """

    exponents: tuple

    def __post_init__(self):
        exps = tuple(sorted(int(k) for k in self.exponents))
        if any(k < 2 for k in exps):
            raise ValueError(f"exponents must be >= 2, got {exps}")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def parse(cls, text):
        """Build from a comma separated list such as ``"2,2,3"``."""
        parts = [p.strip() for p in str(text).split(",") if p.strip()]
        if not parts:
            raise ValueError("empty exponent list")
        return cls(tuple(int(p) for p in parts))

    @property
    def r(self):
        return len(self.exponents)

    @property
    def k_max(self):
        return self.exponents[-1]

    @property
    def min_representable(self):
        """Smallest n with a representation: every coordinate equal to 2."""
        return sum(2**k for k in self.exponents)

    def __iter__(self):
        return iter(self.exponents)

    def __str__(self):
        return ",".join(map(str, self.exponents))


def _exponents(k):
    return k.exponents if isinstance(k, KTuple) else tuple(k)


def density(k):
    """rho = sum of 1/k_j."""
    return math.fsum(1.0 / kj for kj in _exponents(k))


def g_of_k(k):
    """G(k) = product of Gamma(1 + 1/k_j); 1 for the empty tuple."""
    return math.prod(gamma_k(kj) for kj in _exponents(k))


@dataclass(frozen=True)
class ComplexParam:
    """z = 1/N - 2 pi i alpha for |alpha| <= 1/2."""

    n_scale: int
    alpha: float

    def __post_init__(self):
        if self.n_scale < 1:
            raise ValueError("N must be positive")
        if abs(self.alpha) > 0.5:
            raise ValueError("alpha must lie in [-1/2, 1/2]")

    @property
    def value(self):
        return complex(1.0 / self.n_scale, -2.0 * math.pi * self.alpha)


def z_value(big_n, alpha):
    """Vectorised z(alpha) for scale N."""
    alpha = np.asarray(alpha, dtype=np.float64)
    return (1.0 / big_n) - 2j * np.pi * alpha


def z_power_neg_mu(z, mu):
    """Principal branch of ``z ** -mu``.

    ``z`` is a :class:`ComplexParam`, a complex number or an array with
    positive real part.  Computed as ``exp(-mu (log|z| + i arg z))``.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    if isinstance(z, ComplexParam):
        z = z.value
    zz = np.asarray(z, dtype=np.complex128)
    if np.any(zz.real <= 0):
        raise ValueError("z must have positive real part")
    out = np.exp(-mu * (np.log(np.abs(zz)) + 1j * np.angle(zz)))
    return complex(out) if out.ndim == 0 else out


def big_a(big_n, c):
    """A(N; c) = exp(c (log N / log log N)^(1/3)).

    Raises:
        ValueError: when log log N <= 0, i.e. N <= e.
    """
    log_n = math.log(big_n)
    if log_n <= 1.0:
        raise ValueError("A(N; c) needs log log N > 0 (N > e)")
    return math.exp(c * (log_n / math.log(log_n)) ** (1.0 / 3.0))
