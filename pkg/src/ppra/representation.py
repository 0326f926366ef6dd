"""Representation counts R(n; k) and their short-interval sums.

``R(n; k)`` is the von Mangoldt weighted number of ways to write
``n = m_1**k_1 + ... + m_r**k_r``.  Tables are built by successive additive
convolutions of the sequences carrying ``Lambda(m)`` at index ``m**k``;
window sums over ``(N, N + H]`` enumerate the first ``r - 1`` coordinates
and count the last one with Chebyshev psi differences.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .arith import integer_kth_root, psi_prefix, sieve_lambda
from .asymptotics import main_term, weighted_main_term
from .special import KTuple

#: Largest FFT length accepted by :func:`convolve_fast`.
MAX_FFT_LENGTH = 1 << 28
#: Number of first-coordinate values per work item in :func:`window_sum`.
WINDOW_BLOCK = 32


class InsufficientTableError(ValueError):
    """The von Mangoldt or psi table does not reach far enough."""


class ConvolutionSizeError(MemoryError):
    """Padded transform length exceeds :data:`MAX_FFT_LENGTH`."""


@dataclass(frozen=True, eq=False)
class PowerWeightedSeq:
    k: int
    limit: int
    coeffs: np.ndarray

    def nonzero(self):
        return np.flatnonzero(self.coeffs)


@dataclass(frozen=True, eq=False)
class RepTable:
    tuple: KTuple
    limit: int
    values: np.ndarray

    def __getitem__(self, n):
        return self.values[n]


@dataclass(frozen=True)
class WindowReport:
    N: int
    H: int
    raw_sum: float
    weighted_sum: float
    main_term: float
    weighted_main_term: float
    relative_deviation: float


def power_seq(table, k, limit):
    """Sequence with ``Lambda(m)`` at index ``m**k`` for ``m**k <= limit``."""
    m_max = integer_kth_root(limit, k)
    if table.limit < m_max:
        raise InsufficientTableError(
            f"Lambda table reaches {table.limit}, need {m_max}")
    m, logs = table.prime_powers(m_max)
    coeffs = np.zeros(limit + 1)
    coeffs[m.astype(np.int64) ** k] = logs
    return PowerWeightedSeq(k, limit, coeffs)


def _as_array(seq):
    if isinstance(seq, PowerWeightedSeq):
        return seq.coeffs
    return np.asarray(seq, dtype=np.float64)


def convolve_direct(a, b, limit):
    """Reference additive convolution truncated to indices ``<= limit``.

    Cost is (nonzeros of ``a``) x ``limit``, so put the sparser operand
    first.
    """
    a = _as_array(a)[: limit + 1]
    b = _as_array(b)[: limit + 1]
    out = np.zeros(limit + 1)
    for i in np.flatnonzero(a):
        span = min(b.size, limit + 1 - i)
        out[i:i + span] += a[i] * b[:span]
    return out


def convolve_fast(a, b, limit, max_length=MAX_FFT_LENGTH):
    """FFT additive convolution with the same contract as convolve_direct.

    Inputs are zero padded so the cyclic product has no wraparound.
    Entries outside the sumset of the two supports are set to exactly
    zero; the support is found from an integer-valued convolution of the
    indicator sequences.
    """
    a = _as_array(a)[: limit + 1]
    b = _as_array(b)[: limit + 1]
    out = np.zeros(limit + 1)
    if a.size == 0 or b.size == 0:
        return out
    need = a.size + b.size - 1
    size = 1 << max(need - 1, 1).bit_length()
    if size > max_length:
        raise ConvolutionSizeError(
            f"padded length {size} exceeds budget {max_length}")
    prod = np.fft.irfft(np.fft.rfft(a, size) * np.fft.rfft(b, size), size)
    hits = np.fft.irfft(
        np.fft.rfft(a != 0, size) * np.fft.rfft(b != 0, size), size)
    n = min(limit + 1, need)
    out[:n] = np.where(np.rint(hits[:n]) > 0, prod[:n], 0.0)
    return out


def _direct_is_cheaper(a, limit):
    size = 1 << max(2 * limit + 1, 2).bit_length()
    return np.count_nonzero(a) * (limit + 1) <= 8 * size * math.log2(size)


def rep_table(ktuple, limit, strategy="auto", table=None):
    """R(n; k) for every ``n <= limit``.

    Args:
        ktuple: :class:`KTuple` or sequence of exponents.
        limit: largest n tabulated.
        strategy: ``"direct"``, ``"fast"`` or ``"auto"`` (picks per step by
            estimated operation count).
        table: optional :class:`LambdaTable`; sieved on demand otherwise.
    """
    if not isinstance(ktuple, KTuple):
        ktuple = KTuple(tuple(ktuple))
    if strategy not in ("direct", "fast", "auto"):
        raise ValueError(f"unknown strategy {strategy!r}")
    need = integer_kth_root(limit, ktuple.exponents[0])
    if table is None:
        table = sieve_lambda(max(need, 1))
    seqs = [power_seq(table, k, limit).coeffs for k in ktuple.exponents]
    acc = seqs[-1]
    for seq in reversed(seqs[:-1]):
        use_direct = strategy == "direct" or (
            strategy == "auto" and _direct_is_cheaper(seq, limit))
        conv = convolve_direct if use_direct else convolve_fast
        acc = conv(seq, acc, limit)
    return RepTable(ktuple, limit, acc)


def rep_single_bruteforce(n, ktuple, table=None):
    """R(n; k) by nested enumeration of prime-power coordinates.

    Independent of the convolution path; meant for ``r <= 5``.
    """
    if not isinstance(ktuple, KTuple):
        ktuple = KTuple(tuple(ktuple))
    if ktuple.r > 5:
        raise ValueError("brute force is limited to r <= 5")
    if n < 1:
        return 0.0
    need = integer_kth_root(n, ktuple.exponents[0])
    if table is None:
        table = sieve_lambda(max(need, 1))
    elif table.limit < need:
        raise InsufficientTableError(
            f"Lambda table reaches {table.limit}, need {need}")
    pp_m, pp_log = table.prime_powers(need)
    exps = np.array(ktuple.exponents, dtype=np.int64)
    return float(kernels.bruteforce_rep(int(n), exps, pp_m, pp_log,
                                        table.values))


def window_sum(big_n, h, ktuple, psi, workers=1):
    """Sums of R(n; k) and of exp(-n/N) R(n; k) over ``N < n <= N + H``.

    Work is split by the value of the first coordinate; each piece is
    summed sequentially and the pieces are combined with ``math.fsum``, so
    the result does not depend on ``workers``.
    """
    if not isinstance(ktuple, KTuple):
        ktuple = KTuple(tuple(ktuple))
    if ktuple.r < 2:
        raise ValueError("window_sum needs r >= 2")
    big_n, h = int(big_n), int(h)
    if h < 0 or big_n < 1:
        raise ValueError("need N >= 1 and H >= 0")
    if h == 0:
        return WindowReport(big_n, 0, 0.0, 0.0, 0.0, 0.0, 0.0)
    mt = main_term(big_n, h, ktuple)
    wmt = weighted_main_term(big_n, h, ktuple)
    top = big_n + h
    need = integer_kth_root(top, ktuple.exponents[0])
    if psi.limit < need:
        raise InsufficientTableError(
            f"psi table reaches {psi.limit}, need {need}")
    pp_m, pp_log = psi.table.prime_powers(need)
    exps = np.array(ktuple.exponents, dtype=np.int64)
    lam = psi.table.values
    blocks = [(lo, min(lo + WINDOW_BLOCK, pp_m.size))
              for lo in range(0, pp_m.size, WINDOW_BLOCK)]

    def run(block):
        return kernels.window_partials(big_n, h, exps, pp_m, pp_log, lam,
                                       psi.cumulative, *block)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]
    raw = math.fsum(x for r, _ in parts for x in r.tolist())
    weighted = math.fsum(x for _, w in parts for x in w.tolist())
    return WindowReport(big_n, h, raw, weighted, mt, wmt,
                        abs(raw - mt) / mt)


def window_psi(big_n, h, ktuple):
    """Psi table sufficient for :func:`window_sum` on ``(N, N + H]``."""
    if not isinstance(ktuple, KTuple):
        ktuple = KTuple(tuple(ktuple))
    need = integer_kth_root(int(big_n) + int(h), ktuple.exponents[0])
    return psi_prefix(sieve_lambda(max(need, 2)))
