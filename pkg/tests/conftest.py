"""Shared solver runs; engine solves at 256 bits are cached per session."""

from __future__ import annotations

import sys
from functools import lru_cache
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from fraccahn.grid import Grid1D  # noqa: E402
from fraccahn.models import Equation, ICKind, ProblemSpec, default_grid, make_ic  # noqa: E402
from fraccahn.nim import NimConfig, nim_components  # noqa: E402
from fraccahn.qham import QhamConfig, qham_components, qham_partial_sum  # noqa: E402

LAM = 0.1


def problem(eq, ic, alpha=1.0, mu=1.0, grid=None, lam=LAM):
    ic = ICKind(ic)
    return ProblemSpec(Equation(eq), alpha, mu, make_ic(ic, lam), grid or default_grid(ic))


@lru_cache(maxsize=None)
def nim_run(eq, ic, alpha=1.0, mu=1.0, iterations=2, grid: Grid1D | None = None):
    return tuple(nim_components(problem(eq, ic, alpha, mu, grid), NimConfig(iterations=iterations)))


@lru_cache(maxsize=None)
def qham_run(eq, ic, alpha=1.0, mu=1.0, h=-1.0, n=1, orders=3, grid: Grid1D | None = None):
    return tuple(qham_components(problem(eq, ic, alpha, mu, grid), QhamConfig(orders=orders, h=h, n=n)))


def qham_sum(eq, ic, alpha=1.0, mu=1.0, h=-1.0, n=1, grid=None):
    return qham_partial_sum(list(qham_run(eq, ic, alpha, mu, h, n, grid=grid)), n, 3)


def window(grid, lo=-3.0, hi=3.0):
    """Node indices inside ``[lo, hi]``."""
    x = grid.nodes
    return np.flatnonzero((x >= lo - 1e-12) & (x <= hi + 1e-12))


# one (criterion, passed, detail) entry per acceptance check, printed at the end
ACCEPTANCE: list[tuple[str, bool, str]] = []


def check(criterion: str, ok: bool, detail: str):
    """Record an acceptance result, then fail the calling test if it did not pass."""
    ACCEPTANCE.append((criterion, bool(ok), detail))
    assert ok, f"criterion {criterion}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {crit}: {detail}")
