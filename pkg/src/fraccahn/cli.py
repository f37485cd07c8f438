"""Command-line entry point: ``solve``, ``table1`` and ``compare``.

Exit codes: 0 on success, 2 for an invalid configuration (bad flag or
value, unreadable config file, unwritable output), 3 when a coefficient
field turns non-finite.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from .analysis import (
    TABLE1,
    discrepancy_report,
    engine_error_table,
    export_csv,
    reference_error_table,
    relative_deviation,
    solution_table,
    write_csv,
)
from .errors import ConfigurationError, NumericalFailure, SamplingError
from .grid import Grid1D
from .models import DEFAULT_DOMAINS, Equation, ICKind, ProblemSpec, make_ic
from .nim import NimConfig, nim_components, nim_partial_sum
from .qham import QhamConfig, qham_components, qham_partial_sum
from .reference import Method, RefCase

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so that every failure maps onto our exit codes."""

    def error(self, message):
        raise ConfigurationError(message)


def _times(text: str) -> list[float]:
    try:
        out = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad time list {text!r}") from exc
    if not out or any(not np.isfinite(t) or t < 0 for t in out):
        raise argparse.ArgumentTypeError("times must be a non-empty list of finite values >= 0")
    return out


def _precision(text: str) -> int | None:
    bits = int(text)
    return None if bits == 0 else bits


def _common(sp: argparse.ArgumentParser):
    sp.add_argument("--config", type=Path, help="file of 'key = value' lines; flags given here win")
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--mu", type=float, default=1.0)
    sp.add_argument("--lambda", dest="lam", type=float, default=None)
    sp.add_argument("--h", type=float, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--xmin", type=float, default=None)
    sp.add_argument("--xmax", type=float, default=None)
    sp.add_argument("--points", type=int, default=None)
    sp.add_argument("--stencil-order", type=int, default=8)
    sp.add_argument("--power-cap", type=int, default=12)
    sp.add_argument("--precision", type=_precision, default=256, help="MPFR bits, 0 for binary64")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fraccahn", description="Series solutions of time-fractional Cahn-Hilliard equations.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="run NIM or q-HAM and dump the solution as CSV")
    _common(s)
    s.add_argument("--equation", choices=[e.value for e in Equation], required=True)
    s.add_argument("--ic", choices=[i.value for i in ICKind], required=True)
    s.add_argument("--method", choices=["nim", "qham"], required=True)
    s.add_argument("--orders", type=int, default=None, help="NIM iterations or q-HAM orders")
    s.add_argument("--times", type=_times, default=[0.01, 0.05, 0.08, 0.1])
    s.add_argument("--out", type=Path, default=None, help="CSV path (stdout when omitted)")

    t = sub.add_parser("table1", help="error table from the printed forms and from the engine")
    t.add_argument("--config", type=Path)
    t.add_argument("--out", type=Path, default=None, help="write the printed-form table as CSV")

    c = sub.add_parser("compare", help="engine versus printed-form discrepancy report")
    _common(c)
    c.add_argument("--case", required=True, help="e.g. ch6-tanh-qham")
    c.add_argument("--times", type=_times, default=[0.01, 0.1])
    c.add_argument("--tol", type=float, default=1e-4)
    c.add_argument("--no-localize", action="store_true")
    return ap


def read_config(path: Path) -> list[str]:
    """Turn ``key = value`` lines into command-line tokens."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    tokens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("_", "-"), value.strip()
        if not sep or not key:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value'")
        if key == "config":
            raise ConfigurationError(f"{path}:{lineno}: config files cannot nest")
        tokens += [f"--{key}", value] if value else [f"--{key}"]
    return tokens


def parse_args(argv: list[str]) -> argparse.Namespace:
    pre = _Parser(add_help=False)
    pre.add_argument("--config", type=Path)
    known, _ = pre.parse_known_args(argv)
    if known.config is not None and argv:
        # file values go first so that explicit flags override them
        argv = [argv[0], *read_config(known.config), *argv[1:]]
    return build_parser().parse_args(argv)


def _grid(args, ic: ICKind) -> Grid1D:
    lo, hi, n = DEFAULT_DOMAINS[ic]
    return Grid1D(
        lo if args.xmin is None else args.xmin,
        hi if args.xmax is None else args.xmax,
        n if args.points is None else args.points,
        accuracy=args.stencil_order,
        precision=args.precision,
    )


def _check_domain_options(args):
    if args.stencil_order not in (2, 4, 6, 8):
        raise ConfigurationError("stencil order must be one of 2, 4, 6, 8")


def cmd_solve(args, out) -> int:
    _check_domain_options(args)
    ic_kind = ICKind(args.ic)
    ic = make_ic(ic_kind, args.lam)
    p = ProblemSpec(Equation(args.equation), args.alpha, args.mu, ic, _grid(args, ic_kind))
    if args.method == "nim":
        if args.h is not None or args.n is not None:
            raise ConfigurationError("--h and --n only apply to qham")
        cfg = NimConfig(args.orders or 2, args.power_cap, args.stencil_order, args.precision)
        series = {"nim": nim_partial_sum(nim_components(p, cfg), cfg.iterations)}
    else:
        h = -1.0 if args.h is None else args.h
        n = 1 if args.n is None else args.n
        cfg = QhamConfig(args.orders or 3, h, n, args.power_cap, args.stencil_order, args.precision)
        series = {"qham": qham_partial_sum(qham_components(p, cfg), cfg.n, cfg.orders)}
    exact = (p.equation, ic_kind, p.alpha, p.mu) == (Equation.CH4, ICKind.TANH, 1.0, 1.0)
    table = solution_table(args.times, series.get("nim"), series.get("qham"), exact=exact)
    for name, col in table.columns.items():
        if not np.all(np.isfinite(col)):
            raise NumericalFailure(f"{name} overflows binary64 output")
    if args.out is None:
        write_csv(table, out)
    else:
        _write(table, args.out)
    return EXIT_OK


def _write(data, path: Path):
    try:
        export_csv(data, path)
    except OSError as exc:
        raise ConfigurationError(f"cannot write {path}: {exc}") from exc


def cmd_table1(args, out) -> int:
    t0 = time.perf_counter()
    ref = reference_error_table()
    t_ref = time.perf_counter() - t0
    t0 = time.perf_counter()
    eng = engine_error_table()
    t_eng = time.perf_counter() - t0
    dev_r, dev_e = relative_deviation(ref), relative_deviation(eng)
    print(f"{'t':>5} {'x':>4} | {'published NIM':>13} {'printed':>13} {'engine':>13} | "
          f"{'published qHAM':>14} {'printed':>13} {'engine':>13}", file=out)
    worst = [0.0, 0.0]
    for r, e, dr, de in zip(ref, eng, dev_r, dev_e):
        pn, pq = TABLE1[(r.t, r.x)]
        print(f"{r.t:5.2f} {r.x:4.1f} | {pn:13.6e} {r.abs_err_nim:13.6e} {e.abs_err_nim:13.6e} | "
              f"{pq:14.6e} {r.abs_err_qham:13.6e} {e.abs_err_qham:13.6e}", file=out)
        worst[0] = max(worst[0], abs(dr[0]), abs(dr[1]))
        worst[1] = max(worst[1], abs(de[0]), abs(de[1]))
    print(f"max relative deviation: printed forms {worst[0]:.3e} ({t_ref:.2f} s), "
          f"engine {worst[1]:.3e} ({t_eng:.2f} s)", file=out)
    if args.out is not None:
        _write(ref, args.out)
    return EXIT_OK


def cmd_compare(args, out) -> int:
    _check_domain_options(args)
    case = RefCase.parse(args.case)
    if case.method is Method.EXACT:
        raise ConfigurationError("compare needs a nim or qham case")
    rep = discrepancy_report(
        case,
        alpha=args.alpha,
        mu=args.mu,
        lam=args.lam,
        h=args.h,
        n=args.n,
        times=args.times,
        tol=args.tol,
        grid=_grid(args, case.ic),
        localize=not args.no_localize,
        precision=args.precision,
        stencil_order=args.stencil_order,
        power_cap=args.power_cap,
    )
    for line in rep.lines():
        print(line, file=out)
    if not args.no_localize:
        print(f"localized: {'yes' if rep.localized() else 'no'}", file=out)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "table1": cmd_table1, "compare": cmd_compare}


def cli_main(argv: list[str] | None = None, out=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    out = sys.stdout if out is None else out
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args, out)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (NumericalFailure, SamplingError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
