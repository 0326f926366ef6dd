"""Prime-power representation counts, window sums and exponential-sum checks."""
from .arith import LambdaTable, PsiPrefix, cached_sieve, integer_kth_root, psi_prefix, sieve_lambda
from .asymptotics import TheoremConfig, admissible_h_range, ladder_report, main_term
from .kernels import BACKEND
from .representation import rep_single_bruteforce, rep_table, window_sum
from .special import KTuple, gamma_k, gamma_real

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "KTuple",
    "LambdaTable",
    "PsiPrefix",
    "TheoremConfig",
    "admissible_h_range",
    "cached_sieve",
    "gamma_k",
    "gamma_real",
    "integer_kth_root",
    "ladder_report",
    "main_term",
    "psi_prefix",
    "rep_single_bruteforce",
    "rep_table",
    "sieve_lambda",
    "window_sum",
]
