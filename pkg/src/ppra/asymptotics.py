"""Main terms, admissible window lengths and error models.

The implied constants of the asymptotic statements are unknown, so the
error models here are shapes with constant 1; pass/fail budgets elsewhere
use the constant :data:`BUDGET_CONSTANT`.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .special import KTuple, big_a, density, g_of_k, gamma_real

#: Implied constant used for hard pass/fail budgets.
BUDGET_CONSTANT = 5.0


class EmptyRangeError(ValueError):
    """No admissible window length exists for this N and epsilon."""


@dataclass(frozen=True)
class TheoremConfig:
    """Parameters of a theorem-level comparison.

    ``c1`` stands in for the unspecified constant in the error saving;
    ``growth_margin`` turns the condition "H grows faster than
    N^(1 - 1/k_r) (log N)^6" into a finite threshold.
    """

    tuple: KTuple
    epsilon: float = 0.05
    rh_mode: bool = False
    c1: float = 1.0
    growth_margin: float = 10.0

    def __post_init__(self):
        if not isinstance(self.tuple, KTuple):
            object.__setattr__(self, "tuple", KTuple(tuple(self.tuple)))
        if self.tuple.r < 3:
            raise ValueError("theorem comparisons require r >= 3")
        if not 0.0 < self.epsilon < 0.25:
            raise ValueError("epsilon must lie in (0, 1/4)")
        if self.c1 <= 0:
            raise ValueError("c1 must be positive")
        if self.growth_margin <= 1:
            raise ValueError("growth_margin must exceed 1")

    @property
    def b_exponent(self):
        """Exponent of the auxiliary cut B = N^(2 epsilon)."""
        return 2.0 * self.epsilon


@dataclass(frozen=True)
class LadderRow:
    N: int
    H: int
    raw_sum: float
    main_term: float
    relative_deviation: float
    phi_error_model: float
    unconditional_error_model: float
    in_range: bool
    note: str = ""


def _ktuple(k):
    return k if isinstance(k, KTuple) else KTuple(tuple(k))


def main_coefficient(ktuple):
    """G(k) / Gamma(rho)."""
    ktuple = _ktuple(ktuple)
    return g_of_k(ktuple) / gamma_real(density(ktuple))


def main_term(big_n, h, ktuple):
    """G(k)/Gamma(rho) * H * N^(rho - 1); exactly linear in H."""
    ktuple = _ktuple(ktuple)
    scale = main_coefficient(ktuple) * float(big_n) ** (density(ktuple) - 1.0)
    return scale * h


def weighted_main_term(big_n, h, ktuple):
    """Main term of the exp(-n/N) weighted window sum: main_term / e."""
    return main_term(big_n, h, ktuple) / math.e


def admissible_h_range(big_n, config):
    """Open interval ``(h_min, h_max)`` of admissible window lengths.

    Unconditional: ``(N^(1 - 5/(6 k_r) + eps), N^(1 - eps))``.  Under RH:
    ``(growth_margin * N^(1 - 1/k_r) (log N)^6, N^(1 - eps))``.

    Raises:
        EmptyRangeError: if ``h_min >= h_max``.
    """
    if big_n < 16:
        raise ValueError("N must be >= 16")
    k_r = config.tuple.k_max
    eps = config.epsilon
    n = float(big_n)
    h_max = n ** (1.0 - eps)
    if config.rh_mode:
        h_min = config.growth_margin * n ** (1.0 - 1.0 / k_r) * math.log(n) ** 6
    else:
        h_min = n ** (1.0 - 5.0 / (6.0 * k_r) + eps)
    if h_min >= h_max:
        raise EmptyRangeError(
            f"no admissible H for N={big_n}: {h_min:.6g} >= {h_max:.6g}")
    return h_min, h_max


def unconditional_exponents(config):
    """Exponent bounds ``(1 - 5/(6 k_r) + eps, 1 - eps)``."""
    k_r = config.tuple.k_max
    return 1.0 - 5.0 / (6.0 * k_r) + config.epsilon, 1.0 - config.epsilon


def phi_error_model(big_n, h, ktuple):
    """H^2 N^(rho-2) + H^(1/2) N^(rho - 1/2 - 1/(2 k_r)) (log N)^3."""
    ktuple = _ktuple(ktuple)
    rho = density(ktuple)
    n = float(big_n)
    return (h * h * n ** (rho - 2.0)
            + math.sqrt(h) * n ** (rho - 0.5 - 0.5 / ktuple.k_max)
            * math.log(n) ** 3)


def unconditional_error_model(big_n, h, ktuple, c):
    """H N^(rho - 1) A(N; c)."""
    ktuple = _ktuple(ktuple)
    return h * float(big_n) ** (density(ktuple) - 1.0) * big_a(big_n, c)


def ladder_h(big_n, h_exponent):
    return math.ceil(float(big_n) ** h_exponent)


def _ladder_row(config, big_n, h_exponent, psi):
    from .representation import window_psi, window_sum

    h = ladder_h(big_n, h_exponent)
    note = ""
    try:
        h_min, h_max = admissible_h_range(big_n, config)
        in_range = h_min < h < h_max
        if not in_range:
            note = f"H outside admissible range ({h_min:.6g}, {h_max:.6g})"
    except EmptyRangeError as exc:
        in_range, note = False, str(exc)
    from .arith import integer_kth_root

    if psi is None or psi.limit < integer_kth_root(big_n + h,
                                                   config.tuple.exponents[0]):
        psi = window_psi(big_n, h, config.tuple)
    rep = window_sum(big_n, h, config.tuple, psi)
    return LadderRow(
        N=int(big_n),
        H=h,
        raw_sum=rep.raw_sum,
        main_term=rep.main_term,
        relative_deviation=rep.relative_deviation,
        phi_error_model=phi_error_model(big_n, h, config.tuple),
        unconditional_error_model=unconditional_error_model(
            big_n, h, config.tuple, -config.c1 / 3.0),
        in_range=in_range,
        note=note,
    )


def iter_ladder(config, n_values, h_exponent, psi=None, workers=1):
    """Yield one :class:`LadderRow` per N, in input order, as completed.

    Rows with H outside the admissible range are still computed but carry
    ``in_range=False`` and an explanatory note.
    """
    n_values = [int(n) for n in n_values]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            yield from pool.map(
                lambda n: _ladder_row(config, n, h_exponent, psi), n_values)
    else:
        for n in n_values:
            yield _ladder_row(config, n, h_exponent, psi)


def ladder_report(config, n_values, h_exponent, psi=None, workers=1):
    return list(iter_ladder(config, n_values, h_exponent, psi, workers))


def weight_removal_check(big_n, h, ktuple, psi=None):
    """Compare the weighted window sum with raw_sum / e.

    Returns ``(lhs_gap, budget, passed)`` where
    ``lhs_gap = |weighted_sum - raw_sum / e|`` and
    ``budget = 5 H^2 N^(rho - 2) (1 + G(k)/Gamma(rho))``.
    """
    from .representation import window_psi, window_sum

    ktuple = _ktuple(ktuple)
    if psi is None:
        psi = window_psi(big_n, h, ktuple)
    rep = window_sum(big_n, h, ktuple, psi)
    gap = abs(rep.weighted_sum - rep.raw_sum / math.e)
    budget = (BUDGET_CONSTANT * h * h * float(big_n) ** (density(ktuple) - 2.0)
              * (1.0 + main_coefficient(ktuple)))
    return gap, budget, gap <= budget
