"""Command line front end.

Exit codes: 0 success, 1 a verification budget failed or a report held a
non-finite value, 2 usage error, 3 I/O failure.
"""
import argparse
import math
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import verify
from .arith import (CacheFormatError, SieveLimitError, cached_sieve,
                    integer_kth_root, psi_prefix)
from .asymptotics import EmptyRangeError, TheoremConfig, iter_ladder
from .expsums import (DEFAULT_TRUNC_TAU, ExpSumContext, e_tilde, pnt_ratio,
                      s_tilde, truncation_index, u_sum)
from .report import NonFiniteError, ReportDocument, csv_header, csv_row, emit
from .representation import rep_table, window_sum
from .special import KTuple

COMMANDS = ("sieve", "rep", "window", "ladder", "verify", "expsum")
EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    tuple: KTuple = None
    N: int = None
    H: int = None
    limit: int = None
    h_exponent: float = None
    epsilon: float = 0.05
    c1: float = 1.0
    trunc_tau: float = DEFAULT_TRUNC_TAU
    rh_mode: bool = False
    format: str = "csv"
    cache_dir: str = None
    workers: int = 1
    seed: int = 0
    suite: list = field(default_factory=lambda: ["all"])
    n_list: list = None
    strategy: str = "auto"
    grid: int = 1001
    out: str = None

    def echo(self):
        d = asdict(self)
        d["tuple"] = str(self.tuple) if self.tuple else None
        d.pop("out")
        d.pop("cache_dir")
        d.pop("workers")
        return d


def _ktuple(text):
    try:
        return KTuple.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected comma separated integers >= 2 ({exc})")


def _int_like(text):
    # accepts 100000, 1e5, 10**5
    try:
        if "**" in text:
            base, exp = text.split("**")
            return int(base) ** int(exp)
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _non_negative(text):
    value = _int_like(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _positive(text):
    value = _int_like(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _int_list(text):
    return [_positive(p) for p in text.split(",") if p.strip()]


def _seed(text):
    value = _non_negative(text)
    if value >= 2**64:
        raise argparse.ArgumentTypeError("must fit in 64 bits")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--cache-dir", dest="cache_dir",
                        default=os.environ.get("PPRA_CACHE_DIR"),
                        help="Lambda table cache (default: $PPRA_CACHE_DIR)")
    common.add_argument("--workers", type=_positive, default=1)
    common.add_argument("--seed", type=_seed, default=0)

    parser = argparse.ArgumentParser(
        prog="ppra",
        description="Prime-power representation counts and exponential-sum checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", parents=[common], help="tabulate Lambda(n)")
    p.add_argument("--limit", type=_positive, required=True)

    p = sub.add_parser("rep", parents=[common], help="table of R(n; k)")
    p.add_argument("--k", dest="tuple", type=_ktuple, required=True)
    p.add_argument("--limit", type=_positive, required=True)
    p.add_argument("--strategy", choices=("direct", "fast", "auto"),
                   default="auto")

    p = sub.add_parser("window", parents=[common],
                       help="sum of R(n; k) over N < n <= N + H")
    p.add_argument("--k", dest="tuple", type=_ktuple, required=True)
    p.add_argument("--N", dest="N", type=_positive, required=True)
    p.add_argument("--H", dest="H", type=_int_like, required=True)

    p = sub.add_parser("ladder", parents=[common],
                       help="window sums against the main term over several N")
    p.add_argument("--k", dest="tuple", type=_ktuple, required=True)
    p.add_argument("--h-exp", dest="h_exponent", type=float, required=True)
    p.add_argument("--N-list", dest="n_list", type=_int_list, required=True)
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--c1", type=float, default=1.0)
    p.add_argument("--rh", dest="rh_mode", action="store_true")

    p = sub.add_parser("verify", parents=[common], help="numerical check suites")
    p.add_argument("--suite", default="all",
                   help="comma list of: " + "|".join(verify.SUITES + ("all",)))

    p = sub.add_parser("expsum", parents=[common],
                       help="S, E and U on an alpha grid")
    p.add_argument("--k", dest="tuple", type=_ktuple, required=True)
    p.add_argument("--N", dest="N", type=_positive, required=True)
    p.add_argument("--H", dest="H", type=_positive, default=None)
    p.add_argument("--grid", type=_positive, default=1001)
    p.add_argument("--trunc-tau", dest="trunc_tau", type=float,
                   default=DEFAULT_TRUNC_TAU)
    return parser


def parse_args(argv=None):
    """Parse ``argv`` into a :class:`RunConfig`; usage errors exit with 2."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    values = {k: v for k, v in vars(ns).items() if v is not None}
    if "suite" in values:
        values["suite"] = [s.strip() for s in values["suite"].split(",")]
        bad = set(values["suite"]) - set(verify.SUITES) - {"all"}
        if bad:
            parser.error(f"argument --suite: unknown suite(s) {sorted(bad)}")
    if ns.command == "window" and ns.H < 0:
        parser.error("argument --H: must be >= 0")
    if ns.command == "window" and ns.tuple.r < 2:
        parser.error("argument --k: window sums need at least two exponents")
    if ns.command == "ladder":
        if ns.tuple.r < 3:
            parser.error("argument --k: theorem comparisons require r >= 3 exponents")
        if not 0 < ns.epsilon < 0.25:
            parser.error("argument --epsilon: must lie in (0, 1/4)")
        if ns.c1 <= 0:
            parser.error("argument --c1: must be positive")
    if ns.command == "expsum" and ns.tuple.r != 1:
        parser.error("argument --k: expsum takes a single exponent")
    if getattr(ns, "trunc_tau", 1.0) <= 0:
        parser.error("argument --trunc-tau: must be positive")
    return RunConfig(**values)


def _table(config, limit):
    return cached_sieve(max(limit, 2), config.cache_dir)


def _cmd_sieve(config):
    table = _table(config, config.limit)
    psi = psi_prefix(table)
    rows = [{"n": n, "lambda": float(v)} for n, v in enumerate(table.values.tolist())]
    return ReportDocument(config.echo(), ["n", "lambda"], rows,
                          {"limit": config.limit, "psi": psi(config.limit)})


def _cmd_rep(config):
    k = config.tuple
    need = integer_kth_root(config.limit, k.exponents[0])
    table = _table(config, need)
    rt = rep_table(k, config.limit, config.strategy, table)
    rows = [{"n": n, "r": float(v)} for n, v in enumerate(rt.values.tolist())]
    return ReportDocument(config.echo(), ["n", "r"], rows,
                          {"limit": config.limit, "total": math.fsum(rt.values.tolist())})


def _window_psi(config, big_n, h):
    need = integer_kth_root(big_n + h, config.tuple.exponents[0])
    return psi_prefix(_table(config, need))


def _cmd_window(config):
    psi = _window_psi(config, config.N, config.H)
    rep = window_sum(config.N, config.H, config.tuple, psi, config.workers)
    row = {"n": rep.N, "h": rep.H, "raw_sum": rep.raw_sum,
           "weighted_sum": rep.weighted_sum, "main_term": rep.main_term,
           "weighted_main_term": rep.weighted_main_term,
           "relative_deviation": rep.relative_deviation}
    return ReportDocument(config.echo(), list(row), [row], {})


LADDER_FIELDS = ["n", "h", "raw_sum", "main_term", "relative_deviation",
                 "phi_error_model", "unconditional_error_model", "in_range",
                 "note"]


def _ladder_record(row):
    d = asdict(row)
    d["n"] = d.pop("N")
    d["h"] = d.pop("H")
    return {f: d[f] for f in LADDER_FIELDS}


def _ladder_rows(config):
    tc = TheoremConfig(config.tuple, config.epsilon, config.rh_mode, config.c1)
    top = max(config.n_list)
    psi = _window_psi(config, top, math.ceil(top ** config.h_exponent))
    for row in iter_ladder(tc, config.n_list, config.h_exponent, psi,
                           config.workers):
        yield _ladder_record(row)


def _cmd_verify(config):
    rows = verify.run_suites(config.suite, config.seed, config.workers)
    return ReportDocument(config.echo(), verify.FIELDS, rows,
                          verify.summarize(rows))


def _cmd_expsum(config):
    k = config.tuple.exponents[0]
    n_max = truncation_index(config.N, k, config.trunc_tau)
    ctx = ExpSumContext.build(config.N, k, config.trunc_tau,
                              _table(config, n_max))
    alphas = np.linspace(-0.5, 0.5, config.grid)
    s = s_tilde(ctx, alphas, config.workers)
    e = e_tilde(ctx, alphas, config.workers)
    fields = ["alpha", "s_re", "s_im", "e_re", "e_im"]
    u = None
    if config.H:
        u = u_sum(alphas, config.H)
        fields += ["u_re", "u_im"]
    rows = []
    for i, a in enumerate(alphas.tolist()):
        row = {"alpha": a, "s_re": float(s[i].real), "s_im": float(s[i].imag),
               "e_re": float(e[i].real), "e_im": float(e[i].imag)}
        if u is not None:
            row["u_re"] = float(u[i].real)
            row["u_im"] = float(u[i].imag)
        rows.append(row)
    summary = {"n_max": ctx.n_max, "pnt_ratio": pnt_ratio(ctx)}
    return ReportDocument(config.echo(), fields, rows, summary)


_BUILDERS = {
    "sieve": _cmd_sieve,
    "rep": _cmd_rep,
    "window": _cmd_window,
    "verify": _cmd_verify,
    "expsum": _cmd_expsum,
}


def _open_out(config):
    if config.out:
        return open(config.out, "wb")
    return sys.stdout.buffer


def run(config):
    """Execute ``config``; returns the process exit code."""
    try:
        if config.command == "ladder" and config.format == "csv":
            # stream rows as they complete
            fh = _open_out(config)
            try:
                fh.write(csv_header(LADDER_FIELDS).encode())
                fh.flush()
                for rec in _ladder_rows(config):
                    fh.write(csv_row(LADDER_FIELDS, rec).encode())
                    fh.flush()
            finally:
                if fh is not sys.stdout.buffer:
                    fh.close()
            return EXIT_OK
        if config.command == "ladder":
            rows = list(_ladder_rows(config))
            report = ReportDocument(config.echo(), LADDER_FIELDS, rows,
                                    {"rows": len(rows),
                                     "in_range": sum(r["in_range"] for r in rows)})
        else:
            report = _BUILDERS[config.command](config)
        data = emit(report, config.format)
        fh = _open_out(config)
        try:
            fh.write(data)
            fh.flush()
        finally:
            if fh is not sys.stdout.buffer:
                fh.close()
    except NonFiniteError as exc:
        print(f"ppra: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (OSError, CacheFormatError) as exc:
        print(f"ppra: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SieveLimitError, EmptyRangeError, ValueError) as exc:
        print(f"ppra: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if config.command == "verify" and report.summary["failed"]:
        return EXIT_CHECK
    return EXIT_OK


def main(argv=None):
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
