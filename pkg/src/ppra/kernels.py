"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``PPRA_PURE_PYTHON`` is set to a non-empty value, the
numpy fallback is used.  Both expose the same functions.
"""
import os

from . import _kernels_py

if os.environ.get("PPRA_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

iroot = _impl.iroot
sieve_lambda = _impl.sieve_lambda
s_tilde_points = _impl.s_tilde_points
s_tilde_grid = _impl.s_tilde_grid
bruteforce_rep = _impl.bruteforce_rep
window_partials = _impl.window_partials


def available_backends():
    """Map of backend name to kernel module, for tests and benchmarks."""
    backends = {"python": _kernels_py}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        backends["cython"] = _kernels
    return backends
