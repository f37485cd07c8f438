"""Exact symbolic re-derivation of the NIM and q-HAM components.

Independent of the package engine: every coefficient of t^{k alpha} is a
polynomial in the initial profile P (P = tanh(x/sqrt 2) or P = exp(lam x)),
because dP/dx is itself polynomial in P.  Gamma values enter as the generators
``g_k = Gamma(k alpha + 1)`` and ``ig_k = 1/Gamma(k alpha + 1)``; the constant
1/sqrt(2) is the generator ``s``.  Nothing here touches finite differences.
"""

from __future__ import annotations

from functools import lru_cache

import mpmath
from sympy import QQ
from sympy.polys.rings import ring

KMAX = 8
_names = ["P", "mu", "h", "n", "s", "lam"] + [f"g{k}" for k in range(KMAX + 1)] + [
    f"ig{k}" for k in range(KMAX + 1)
]
R, *GENS = ring(",".join(_names), QQ)
P, MU, H, N, S, LAM = GENS[:6]
G = GENS[6 : 6 + KMAX + 1]
IG = GENS[6 + KMAX + 1 :]


def dx(f, ic):
    if ic == "tanh":
        dp = S * (1 - P**2)
    else:
        dp = LAM * P
    return f.diff(P) * dp


# series: dict k -> ring element (coefficient of t^{k alpha})


def s_add(a, b, cb=1):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, R.zero) + cb * v
    return {k: v for k, v in out.items() if v != 0}


def s_mul(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, R.zero) + x * y
    return {k: v for k, v in out.items() if v != 0}


def s_scale(a, c):
    return {k: c * v for k, v in a.items() if c * v != 0}


def s_dx(a, ic, order=1):
    out = a
    for _ in range(order):
        out = {k: dx(v, ic) for k, v in out.items()}
    return {k: v for k, v in out.items() if v != 0}


def s_J(a):
    return {k + 1: v * G[k] * IG[k + 1] for k, v in a.items()}


def s_D(a):
    return {k - 1: v * G[k] * IG[k - 1] for k, v in a.items() if k >= 1}


def linear_rhs(u, eq, ic):
    if eq == "ch4":
        return s_add(s_add(s_scale(s_dx(u, ic, 1), MU), s_dx(u, ic, 2), -1), s_dx(u, ic, 4), -1)
    return s_add(s_dx(u, ic, 4), s_dx(u, ic, 6))


def nonlinear_rhs(u, eq, ic):
    d = {o: s_dx(u, ic, o) for o in (1, 2, 3, 4)}
    if eq == "ch4":
        a = s_scale(s_mul(u, s_mul(d[1], d[1])), 6)
        b = s_scale(s_mul(s_mul(u, u), d[2]), 3)
        return s_add(a, b)
    terms = [
        s_scale(s_mul(u, d[1]), MU),
        s_scale(s_mul(u, s_mul(d[2], d[2])), -18),
        s_scale(s_mul(s_mul(d[1], d[1]), d[2]), -36),
        s_scale(s_mul(s_mul(u, d[1]), d[3]), -24),
        s_scale(s_mul(s_mul(u, u), d[4]), -3),
    ]
    out = {}
    for t in terms:
        out = s_add(out, t)
    return out


def full_rhs(u, eq, ic):
    return s_add(linear_rhs(u, eq, ic), nonlinear_rhs(u, eq, ic))


@lru_cache(maxsize=None)
def nim(eq, ic, m=2):
    """Components [u0..um] of the NIM recurrence."""
    u = [{0: P}]
    comps = [u[0]]
    u1 = s_J(full_rhs(u[0], eq, ic))
    comps.append(u1)
    partial = [comps[0], s_add(comps[0], u1)]
    for j in range(1, m):
        lin = linear_rhs(comps[j], eq, ic)
        diff = s_add(nonlinear_rhs(partial[j], eq, ic), nonlinear_rhs(partial[j - 1], eq, ic), -1)
        nxt = s_J(s_add(lin, diff))
        comps.append(nxt)
        partial.append(s_add(partial[-1], nxt))
    return tuple(comps)


@lru_cache(maxsize=None)
def qham(eq, ic, r=3):
    """Components [u0..ur] of the q-HAM recurrence with symbolic h and n.

    The residual is the q-derivative of D(Phi) - rhs(Phi) at q=0, which for
    the cubic nonlinearities equals the printed convolution sums.
    """
    comps = [{0: P}]
    for m in range(1, r + 1):
        res = s_D(comps[m - 1])
        res = s_add(res, _rhs_q_coefficient(comps, m - 1, eq, ic), -1)
        chi = 0 if m <= 1 else N
        nxt = s_add(s_scale(comps[m - 1], chi) if chi else {}, s_scale(s_J(res), H))
        comps.append(nxt)
    return tuple(comps)


def _rhs_q_coefficient(comps, order, eq, ic):
    """Coefficient of q^order in rhs(sum_j comps[j] q^j), by direct Cauchy products."""

    def qprod(*families):
        # families: list of lists indexed by q-power; returns q^order coefficient
        def rec(idx, remaining):
            if idx == len(families) - 1:
                return families[idx][remaining] if remaining < len(families[idx]) else {}
            acc = {}
            for j in range(0, remaining + 1):
                if j >= len(families[idx]):
                    break
                acc = s_add(acc, s_mul(families[idx][j], rec(idx + 1, remaining - j)))
            return acc

        return rec(0, order)

    u = list(comps[: order + 1])
    d = {o: [s_dx(c, ic, o) for c in u] for o in (1, 2, 3, 4, 6)}
    out = {}
    if eq == "ch4":
        out = s_add(out, s_scale(d[1][order], MU))
        out = s_add(out, d[2][order], -1)
        out = s_add(out, d[4][order], -1)
        out = s_add(out, s_scale(qprod(u, d[1], d[1]), 6))
        out = s_add(out, s_scale(qprod(u, u, d[2]), 3))
    else:
        out = s_add(out, s_scale(qprod(u, d[1]), MU))
        out = s_add(out, s_scale(qprod(u, d[2], d[2]), -18))
        out = s_add(out, s_scale(qprod(d[1], d[1], d[2]), -36))
        out = s_add(out, s_scale(qprod(u, d[1], d[3]), -24))
        out = s_add(out, s_scale(qprod(u, u, d[4]), -3))
        out = s_add(out, d[4][order])
        out = s_add(out, d[6][order])
    return out


def evaluate(series, x, alpha, mu=1.0, h=-1.0, n=1.0, lam=0.1, ic="tanh"):
    """Numerically evaluate each t^{k alpha} coefficient at the point ``x``.

    Returns ``{k: value}``; q-HAM (1/n)^j weighting is left to the caller.
    """
    with mpmath.workdps(40):
        xv = mpmath.mpf(x)
        pv = mpmath.tanh(xv / mpmath.sqrt(2)) if ic == "tanh" else mpmath.exp(lam * xv)
        vals = [pv, mpmath.mpf(mu), mpmath.mpf(h), mpmath.mpf(n), 1 / mpmath.sqrt(2), mpmath.mpf(lam)]
        g = [mpmath.gamma(k * mpmath.mpf(alpha) + 1) for k in range(KMAX + 1)]
        vals += g + [1 / v for v in g]
        out = {}
        for k, poly in series.items():
            acc = mpmath.mpf(0)
            for monom, coeff in poly.terms():
                term = mpmath.mpf(coeff.numerator) / coeff.denominator
                for v, e in zip(vals, monom):
                    if e:
                        term *= v**e
                acc += term
            out[k] = float(acc)
        return out


def coefficients(method, eq, ic, x, alpha, mu=1.0, h=-1.0, n=1, lam=0.1, upto=None):
    """Per-power coefficients of the NIM U_upto or q-HAM U_upto partial sum at x."""
    if method == "nim":
        upto = 2 if upto is None else upto
        comps = nim(eq, ic, upto)
        weights = [1.0] * (upto + 1)
    else:
        upto = 3 if upto is None else upto
        comps = qham(eq, ic, upto)
        weights = [float(n) ** (-j) for j in range(upto + 1)]
    total = {}
    for j, c in enumerate(comps[: upto + 1]):
        ev = evaluate(c, x, alpha, mu=mu, h=h, n=n, lam=lam, ic=ic)
        for k, v in ev.items():
            total[k] = total.get(k, 0.0) + weights[j] * v
    return total


def component_coefficients(method, eq, ic, index, x, alpha, mu=1.0, h=-1.0, n=1, lam=0.1):
    comps = nim(eq, ic, max(index, 2)) if method == "nim" else qham(eq, ic, max(index, 3))
    return evaluate(comps[index], x, alpha, mu=mu, h=h, n=n, lam=lam, ic=ic)
