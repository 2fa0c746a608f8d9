"""Continued fractions, irrationality-measure proxies and approach points.

A target ``x0`` may be given as an exact ``Fraction``, a decimal digit string,
an ``mpmath.mpf`` (taken at the current working precision) or a callable
``dps -> mpf`` that can be re-evaluated at any precision.
"""
from __future__ import annotations

import io
import math
from decimal import Decimal
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .errors import PrecisionExhausted, PreconditionError

__all__ = ["Convergent", "convergents", "measure_proxy", "eta_points", "convergents_csv",
           "liouville_blocks", "GOLDEN", "SQRT2"]

DEFAULT_DEPTH = 20


def GOLDEN(dps):
    with mpmath.workdps(dps):
        return (1 + mpmath.sqrt(5)) / 2


def SQRT2(dps):
    with mpmath.workdps(dps):
        return mpmath.sqrt(2)


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    error: mpmath.mpf          # |p - q x0|

    def __post_init__(self):
        if self.q <= 0 or math.gcd(self.p, self.q) != 1:
            raise PreconditionError(f"{self.p}/{self.q} is not a reduced fraction")

    @property
    def log_q(self) -> float:
        return math.log(self.q)

    @property
    def minus_log_err(self) -> float:
        return float(-mpmath.log(self.error))

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


def _as_fraction(x0, dps):
    """Exact rational shadow of ``x0`` at ``dps`` digits plus its absolute uncertainty."""
    if isinstance(x0, (int, Fraction)):
        return Fraction(x0), Fraction(0)
    if callable(x0):
        with mpmath.workdps(dps + 10):
            v = mpmath.mpf(x0(dps + 10))
        return _mpf_fraction(v), Fraction(1, 10 ** dps)
    if isinstance(x0, str):
        # one unit in the last written digit
        d = Decimal(x0.strip())
        return Fraction(d), Fraction(10) ** d.as_tuple().exponent
    v = mpmath.mpf(x0)
    return _mpf_fraction(v), abs(_mpf_fraction(v)) * Fraction(1, 2 ** (mpmath.mp.prec - 1))


def _mpf_fraction(v) -> Fraction:
    # read the exact binary value; mpf(v) would round to the ambient precision
    man, exp = v.man_exp if isinstance(v, mpmath.mpf) else mpmath.mpf(v).man_exp
    return Fraction(man) * (Fraction(2) ** exp)


def _cf(X: Fraction, eps: Fraction, depth: int):
    """Convergents of ``X`` that are certified for every number within ``eps`` of it.

    A convergent is kept while ``eps <= q^-4``, i.e. at least twice the digits
    needed to resolve ``|p - q x0| ~ 1/q`` against ``q^-2``.
    """
    out = []
    p0, q0, p1, q1 = 1, 0, int(math.floor(X)), 1
    rem = X - p1
    terminated = False
    while len(out) < depth:
        if eps and eps * Fraction(q1) ** 4 > 1:
            break
        out.append((p1, q1))
        if rem == 0:
            terminated = True
            break
        y = 1 / rem
        a = int(math.floor(y))
        rem = y - a
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
    return out, terminated


def convergents(x0, depth: int | None = None, dps: int = 50) -> list[Convergent]:
    """Continued-fraction convergents of ``x0`` with high-precision errors.

    With ``depth=None`` up to 20 convergents are returned, stopping early if
    the precision of ``x0`` runs out. An explicit ``depth`` is a requirement:
    falling short raises :class:`PrecisionExhausted`. Callables are re-evaluated
    at increasing precision until the depth is reached.
    """
    strict = depth is not None
    depth = DEFAULT_DEPTH if depth is None else depth
    if depth <= 0:
        raise PreconditionError("depth must be positive")
    while True:
        X, eps = _as_fraction(x0, dps)
        pairs, terminated = _cf(X, eps, depth)
        if terminated:
            raise PrecisionExhausted("continued fraction terminates: x0 is rational",
                                     _with_errors(pairs[:-1], X, dps))
        if len(pairs) >= depth or not callable(x0):
            break
        dps *= 2
        if dps > 200000:
            break
    out = _with_errors(pairs, X, dps)
    if strict and len(out) < depth:
        raise PrecisionExhausted(f"only {len(out)} convergents are certified", out)
    return out


def _with_errors(pairs, X: Fraction, dps: int) -> list[Convergent]:
    if not pairs:
        return []
    work = max(dps, 4 * int(math.log10(max(pairs[-1][1], 2))) + 20)
    with mpmath.workdps(work):
        xv = mpmath.mpf(X.numerator) / X.denominator
        return [Convergent(p, q, abs(p - q * xv)) for p, q in pairs]


def measure_proxy(cs) -> float:
    """Least-squares slope of ``-log|p - q x0|`` against ``log q``."""
    cs = [c for c in cs if c.q > 1]
    if len(cs) < 4:
        raise PreconditionError("measure_proxy needs at least 4 convergents with q > 1")
    x = np.array([c.log_q for c in cs])
    y = np.array([c.minus_log_err for c in cs])
    return float(np.polyfit(x, y, 1)[0])


def liouville_blocks(blocks: int, terms: int | None = None) -> list[Convergent]:
    """Partial sums ``sum_{k<=m} 10^-k!`` of a Liouville number, as convergents.

    The target is the sum over ``k <= terms`` (default ``blocks + 2``), held
    exactly as a rational.
    """
    terms = terms or blocks + 2
    x0 = sum(Fraction(1, 10 ** math.factorial(k)) for k in range(1, terms + 1))
    out = []
    for m in range(1, blocks + 1):
        q = 10 ** math.factorial(m)
        p = sum(10 ** (math.factorial(m) - math.factorial(k)) for k in range(1, m + 1))
        g = math.gcd(p, q)
        p, q = p // g, q // g
        err = abs(p - q * x0)
        with mpmath.workdps(20):
            out.append(Convergent(p, q, mpmath.mpf(err.numerator) / err.denominator))
    return out


def eta_points(pt, x0, etas, dps: int = 50):
    """``x_eta = (p - eta (p - q x0)) / q`` in high precision."""
    p, q = pt.p, pt.q
    with mpmath.workdps(dps):
        X = x0(dps) if callable(x0) else mpmath.mpf(x0)
        if X * q == p:
            raise PreconditionError("x0 must differ from p/q")
        base = p - q * X
        return [(p - mpmath.mpf(e) * base) / q for e in etas]


def convergents_csv(cs) -> str:
    buf = io.StringIO()
    buf.write("k,p,q,log_q,minus_log_err\n")
    for k, c in enumerate(cs):
        buf.write(f"{k},{c.p},{c.q},{c.log_q:.12g},{c.minus_log_err:.12g}\n")
    return buf.getvalue()
