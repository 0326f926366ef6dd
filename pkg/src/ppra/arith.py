"""Von Mangoldt tables, Chebyshev psi prefix sums and exact integer roots."""
import os
import struct
from math import isqrt
from dataclasses import dataclass

import numpy as np

from . import kernels

#: Largest sieve limit accepted without an explicit override (about 9 GB of
#: float64 values).
MAX_SIEVE_LIMIT = 10**9

CACHE_MAGIC = b"PPRA"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sBQ")


class SieveLimitError(MemoryError):
    """Requested table is larger than the configured memory budget."""


class CacheFormatError(ValueError):
    """A cache file is malformed or describes a different table."""


@dataclass(frozen=True, eq=False)
class LambdaTable:
    """Values of the von Mangoldt function on ``0..limit``.

    ``values[n]`` is ``log p`` when ``n`` is a power of the prime ``p`` and
    0 otherwise.  The array is read-only.
    """

    limit: int
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.limit + 1,):
            raise ValueError("values must have length limit + 1")
        self.values.setflags(write=False)

    def __getitem__(self, n):
        return self.values[n]

    def prime_powers(self, upto=None):
        """Prime powers ``m <= upto`` in increasing order with their weights.

        Returns ``(m, log_p)`` as int64 and float64 arrays.
        """
        upto = self.limit if upto is None else min(upto, self.limit)
        m = np.flatnonzero(self.values[: upto + 1]).astype(np.int64)
        return m, self.values[m]


@dataclass(frozen=True, eq=False)
class PsiPrefix:
    """Chebyshev psi prefix sums ``cumulative[t] = sum_{n <= t} Lambda(n)``."""

    limit: int
    cumulative: np.ndarray
    table: LambdaTable

    def __post_init__(self):
        self.cumulative.setflags(write=False)

    def __call__(self, t):
        return float(self.cumulative[t])


def sieve_lambda(limit, max_limit=MAX_SIEVE_LIMIT):
    """Tabulate the von Mangoldt function up to ``limit`` inclusive.

    Args:
        limit: positive integer.
        max_limit: memory budget expressed as the largest allowed limit.

    Raises:
        SieveLimitError: if ``limit > max_limit``.
    """
    limit = int(limit)
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if limit > max_limit:
        raise SieveLimitError(
            f"limit {limit} exceeds the sieve budget {max_limit}")
    return LambdaTable(limit, kernels.sieve_lambda(limit))


def psi_prefix(table):
    cumulative = np.cumsum(table.values)
    return PsiPrefix(table.limit, cumulative, table)


def integer_kth_root(t, k):
    """Return ``r`` with ``r**k <= t < (r + 1)**k`` using integer arithmetic."""
    t = int(t)
    k = int(k)
    if t < 0:
        raise ValueError("t must be non-negative")
    if k < 1:
        raise ValueError("k must be >= 1")
    if t < 2 or k == 1:
        return t
    if k == 2:
        return isqrt(t)
    # Newton iteration from above, then an exact correction
    x = 1 << -(-t.bit_length() // k)
    while True:
        y = ((k - 1) * x + t // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > t:
        x -= 1
    while (x + 1) ** k <= t:
        x += 1
    return x


def save_table(table, path):
    """Write ``table`` in the binary cache format.

    Layout: magic ``PPRA``, one version byte, the limit as little-endian
    uint64, then ``limit + 1`` little-endian float64 values.
    """
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, table.limit))
        fh.write(np.asarray(table.values, dtype="<f8").tobytes())
    os.replace(tmp, path)


def load_table(path, limit=None):
    """Read a cache file written by :func:`save_table`.

    Raises:
        CacheFormatError: bad magic, unknown version, truncated payload, or a
            limit different from the requested one.
    """
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise CacheFormatError(f"{path}: truncated header")
        magic, version, stored = _HEADER.unpack(header)
        if magic != CACHE_MAGIC:
            raise CacheFormatError(f"{path}: bad magic {magic!r}")
        if version != CACHE_VERSION:
            raise CacheFormatError(f"{path}: unsupported version {version}")
        if limit is not None and stored != limit:
            raise CacheFormatError(
                f"{path}: holds limit {stored}, expected {limit}")
        payload = fh.read()
    if len(payload) != 8 * (stored + 1):
        raise CacheFormatError(f"{path}: payload length does not match limit")
    values = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    return LambdaTable(stored, values)


def cached_sieve(limit, cache_dir=None, max_limit=MAX_SIEVE_LIMIT):
    """Sieve with an optional on-disk cache keyed by limit."""
    if cache_dir is None:
        return sieve_lambda(limit, max_limit)
    path = os.path.join(cache_dir, f"lambda_{int(limit)}.ppra")
    if os.path.exists(path):
        return load_table(path, int(limit))
    table = sieve_lambda(limit, max_limit)
    os.makedirs(cache_dir, exist_ok=True)
    save_table(table, path)
    return table
