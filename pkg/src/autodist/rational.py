"""Local analysis of ``phi_tau`` at a rational point ``p/q``.

With ``gamma = (r, -s; -q, p)`` (so ``gamma(p/q) = oo``) and ``u = p - q x``,
the antiderivative obeys the exact expansion

    phi(x) - phi(p/q) = c0 u / q - c'/(lam q) sg^(delta+1) |u|^lam
        + sum_{k=0}^{n} q^k sg^(delta+k) prod_{j<=k}(lam+j) psi^(-k)(gamma x) |u|^(lam+k+1)
        - q^(n+1) sg^(delta+n) prod_{j<=n}(lam+j+1) I_n(x),

where ``c'`` and ``psi`` are the constant term and antiderivative of the
translate ``pi(gamma) tau`` and ``I_n`` is the tail integral
``int_{sg gamma x}^oo (q t + r sg)^(-lam-n-2) psi^(-n)(sg t) dt``.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvariantError, PreconditionError, QuadratureError
from .evaluation import antiderivative_difference, antiderivative_eval, periodic_grid
from .series import FourierSeries, TranslateTable

__all__ = [
    "RationalPoint", "UnimodularMap", "ExpansionReport", "ScalingResult", "Classification",
    "gamma_for", "moebius", "expansion_report", "remainder_scaling", "rational_class",
    "oscillation_probe", "pointwise_lipschitz", "DerivativeEstimate", "difference_quotients",
]

INFINITY = math.inf


@dataclass(frozen=True)
class RationalPoint:
    p: int
    q: int

    def __post_init__(self):
        if self.q <= 0:
            raise InvariantError("q", "denominator must be positive")
        if math.gcd(self.p, self.q) != 1:
            raise InvariantError("p", f"{self.p}/{self.q} is not in lowest terms")

    @classmethod
    def parse(cls, text: str) -> "RationalPoint":
        p, _, q = text.partition("/")
        return cls(int(p), int(q or 1))

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __str__(self):
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class UnimodularMap:
    """The matrix ``(r, -s; -q, p)``; determinant ``p r - q s = 1``."""

    r: int
    s: int
    p: int
    q: int

    def __post_init__(self):
        if self.p * self.r - self.q * self.s != 1:
            raise InvariantError("determinant", f"p r - q s = {self.p * self.r - self.q * self.s}")

    @property
    def matrix(self):
        return ((self.r, -self.s), (-self.q, self.p))


def gamma_for(pt: RationalPoint, shift: int = 0) -> UnimodularMap:
    """Canonical ``gamma`` with ``0 <= r < q`` (``r = 1`` when ``q = 1``).

    ``shift = j`` returns the alternative map with ``r + j q`` in place of ``r``.
    """
    p, q = pt.p, pt.q
    r = 1 if q == 1 else pow(p, -1, q)
    r += shift * q
    s, rem = divmod(p * r - 1, q)
    assert rem == 0
    return UnimodularMap(r=r, s=s, p=p, q=q)


def moebius(g: UnimodularMap, x):
    """``(r x - s) / (p - q x)``; ``+-inf`` at ``x = p/q`` (sign from the numerator)."""
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        den = g.p - g.q * x
        num = g.r * x - g.s
        if den == 0:
            return math.copysign(INFINITY, num)
        return num / den
    x = float(x)
    den = g.p - g.q * x
    num = g.r * x - g.s
    if den == 0:
        return math.copysign(INFINITY, num)
    return num / den


def _gamma_of_offset(g: UnimodularMap, u: float) -> float:
    # gamma x = 1/(q u) - r/q, evaluated without forming x itself
    return 1.0 / (g.q * u) - g.r / g.q


def _offset(pt: RationalPoint, x) -> float:
    return float(Fraction(x) - pt.value)


@dataclass
class ExpansionReport:
    point: str
    x: float
    order: int
    truncation_N: int
    lhs: complex
    linear_term: complex
    lambda_term: complex
    series_terms: list
    remainder_term: complex
    remainder_integral: complex
    remainder_bound: float
    residual: float
    quadrature_error: float
    gamma: tuple = field(default=())

    @property
    def rhs(self) -> complex:
        return self.linear_term + self.lambda_term + sum(self.series_terms) + self.remainder_term

    @property
    def residual_after_terms(self) -> float:
        """``|lhs - (linear + lambda + series)|``, the size of the remainder."""
        return abs(self.lhs - self.linear_term - self.lambda_term - sum(self.series_terms))

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("lhs", "linear_term", "lambda_term", "remainder_term", "remainder_integral"):
            d[key] = {"re": d[key].real, "im": d[key].imag}
        d["series_terms"] = [{"k": k, "re": z.real, "im": z.imag}
                             for k, z in enumerate(self.series_terms)]
        d["residual_after_terms"] = self.residual_after_terms
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _rising(lam: complex, start: int, stop: int) -> complex:
    out = 1 + 0j
    for j in range(start, stop + 1):
        out *= lam + j
    return out


def _tail_modes(a: complex, kappa: np.ndarray, v0: float):
    """``J_m = int_{v0}^oo v^{-a} e^{i kappa_m v} dv`` for every mode.

    Modes with ``|kappa| v0 >= 40`` use the integration-by-parts series
    ``-e^{i k v0} v0^{-a} / (i k) sum_j (a)_j (i k v0)^{-j}``; the rest are
    integrated by Gauss-Legendre panels out to ``v1 = 40/|kappa|``, then
    continued with the same series.
    """
    kappa = np.asarray(kappa, dtype=float)
    out = np.zeros(kappa.shape, dtype=complex)
    err = 0.0
    big = np.abs(kappa) * v0 >= 40
    out[big] = _ibp_series(a, kappa[big], v0)
    x_gl, w_gl = np.polynomial.legendre.leggauss(48)
    for i in np.flatnonzero(~big):
        k = kappa[i]
        v1 = 40.0 / abs(k)
        # panels short in both oscillation and relative length
        edges = [v0]
        while edges[-1] < v1:
            edges.append(min(v1, edges[-1] + min(1.0 / abs(k), 0.5 * edges[-1])))
        edges = np.asarray(edges)
        lo, hi = edges[:-1, None], edges[1:, None]
        v = 0.5 * (hi - lo) * x_gl[None, :] + 0.5 * (hi + lo)
        f = v ** (-a) * np.exp(1j * k * v)
        quad = np.sum(0.5 * (hi - lo)[:, 0] * (f @ w_gl))
        # 24-point rule on the same panels as an error estimate
        x2, w2 = np.polynomial.legendre.leggauss(24)
        v2 = 0.5 * (hi - lo) * x2[None, :] + 0.5 * (hi + lo)
        quad2 = np.sum(0.5 * (hi - lo)[:, 0] * ((v2 ** (-a) * np.exp(1j * k * v2)) @ w2))
        err = max(err, abs(quad - quad2))
        out[i] = quad + _ibp_series(a, np.array([k]), v1)[0]
    return out, err


def _ibp_series(a: complex, kappa: np.ndarray, v0: float) -> np.ndarray:
    if kappa.size == 0:
        return np.zeros(0, dtype=complex)
    z = 1j * kappa * v0
    term = np.ones(kappa.shape, dtype=complex)
    total = term.copy()
    for j in range(80):
        term = term * (a + j) / z
        total += term
        if np.all(np.abs(term) < 1e-17 * np.abs(total)):
            break
    return -np.exp(1j * kappa * v0) * v0 ** (-a) / (1j * kappa) * total


def _sup_bound(sig: FourierSeries, k: int) -> float:
    w = np.abs(sig.values) * (sig.period / (2 * np.pi * np.abs(sig.indices))) ** (k + 1)
    return float(w.sum())


def expansion_report(s: FourierSeries, t: TranslateTable, pt: RationalPoint, x, order: int,
                     N: int, *, g: UnimodularMap | None = None,
                     N_translate: int | None = None) -> ExpansionReport:
    """Evaluate every term of the rational-point expansion at ``x`` and its residual."""
    if order < 0:
        raise PreconditionError("order must be >= 0")
    g = g or gamma_for(pt)
    d = _offset(pt, x)
    if d == 0:
        raise PreconditionError("x must differ from p/q")
    sig = t.lookup(g)
    Nt = min(N_translate or sig.truncation, sig.truncation)
    lam, q = s.lam, pt.q
    c_prime = sig.c0
    if c_prime != 0 and lam == 0:
        raise PreconditionError("lambda = 0 requires a cuspidal translate")
    u = -q * d
    sg = 1 if u > 0 else -1
    au = abs(u)
    P = s.params
    lhs = antiderivative_difference(s, 0, pt.value, d, N)
    linear = s.c0 * u / q
    lam_term = 0j if c_prime == 0 else -c_prime / (lam * q) * P.sign_power(sg, 1) * au ** lam
    gx = _gamma_of_offset(g, u)
    terms = []
    for k in range(order + 1):
        psi = antiderivative_eval(sig, k, gx, Nt)
        terms.append(q ** k * P.sign_power(sg, k) * _rising(lam, 1, k) * psi * au ** (lam + k + 1))
    # tail integral, mode by mode in v = q t + r sg, v from 1/|u| to infinity
    idx, val = sig.window(Nt)
    a = lam + order + 2
    dm = val * (sig.period / (2j * np.pi * idx.astype(float))) ** (order + 1)
    kappa = 2 * np.pi * idx.astype(float) * sg / (q * sig.period)
    shift = np.exp(-2j * np.pi * np.mod(idx * g.r, q * sig.period) / (q * sig.period))
    J, qerr = _tail_modes(a, kappa, 1.0 / au)
    integral = complex(np.sum(dm * shift * J) / q)
    qerr = float(np.sum(np.abs(dm)) * qerr / q)
    bound = au ** (lam.real + order + 1) * _sup_bound(sig, order) / (q * (lam.real + order + 1))
    if qerr > max(1e-8 * bound, 1e-300):
        raise QuadratureError("tail integral did not converge", qerr)
    rem = -q ** (order + 1) * P.sign_power(sg, order) * _rising(lam, 1, order + 1) * integral
    rhs = linear + lam_term + sum(terms) + rem
    return ExpansionReport(
        point=str(pt), x=float(x), order=order, truncation_N=N, lhs=complex(lhs),
        linear_term=complex(linear), lambda_term=complex(lam_term),
        series_terms=[complex(z) for z in terms], remainder_term=complex(rem),
        remainder_integral=integral, remainder_bound=bound, residual=float(abs(lhs - rhs)),
        quadrature_error=qerr, gamma=(g.r, -g.s, -g.q, g.p),
    )


@dataclass
class ScalingResult:
    slope: float
    offsets: list
    residuals: list
    exact_match: bool = False
    fit_residual: float = 0.0

    def __float__(self):
        return self.slope


def _fit(xs, ys):
    A = np.vstack([xs, np.ones_like(xs)]).T
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    resid = ys - A @ coef
    return float(coef[0]), float(np.sqrt(np.mean(resid ** 2)))


def remainder_scaling(s: FourierSeries, t: TranslateTable, pt: RationalPoint, order: int,
                      x_scales, N: int, **kw) -> ScalingResult:
    """Slope of ``log |lhs - (terms through order n)|`` against ``log |p - q x|``."""
    offs = [float(h) for h in x_scales]
    res = []
    for h in offs:
        rep = expansion_report(s, t, pt, pt.value + Fraction(h), order, N, **kw)
        res.append(rep.residual_after_terms)
    res = np.asarray(res)
    if np.all(res == 0):
        return ScalingResult(math.nan, offs, res.tolist(), exact_match=True)
    slope, fr = _fit(np.log(np.abs(pt.q * np.asarray(offs))), np.log(res))
    return ScalingResult(slope, offs, res.tolist(), fit_residual=fr)


@dataclass(frozen=True)
class Classification:
    differentiable: bool
    value: float | None
    reason: str

    def __str__(self):
        return f"Differentiable({self.value:g})" if self.differentiable else \
            f"NonDifferentiable({self.reason})"


def rational_class(s: FourierSeries, t: TranslateTable | None, pt: RationalPoint,
                   part: str = "real", g: UnimodularMap | None = None,
                   tol: float = 1e-12) -> Classification:
    """Differentiability of ``Re phi`` or ``Im phi`` at ``p/q``."""
    if part not in ("real", "imag"):
        raise PreconditionError("part must be 'real' or 'imag'")
    comp = (lambda z: z.real) if part == "real" else (lambda z: z.imag)
    if len(s) == 0:
        return Classification(True, -comp(s.c0) + 0.0, "vanishing series")
    lam = s.lam
    if abs(lam.imag) < tol and lam.real > 0:
        if t is None:
            raise PreconditionError("a translate table is needed when lambda > 0")
        sig = t.lookup(g or gamma_for(pt))
        if abs(comp(sig.c0)) <= tol:
            # + 0.0 turns -0.0 into 0.0
            return Classification(True, -comp(s.c0) + 0.0,
                                  "lambda > 0, translate constant term vanishes")
        return Classification(False, None,
                              f"|u|^lambda term with lambda={lam.real:g}: limit exponent lambda < 1")
    return Classification(False, None,
                          "oscillating |u|^(lambda+1) psi(gamma x) term with Re lambda <= 0")


def oscillation_probe(s: FourierSeries, t: TranslateTable, pt: RationalPoint, scales, N: int,
                      grid_points: int = 1 << 20, reference: bool = False):
    """Extremes of ``Re(|u|^(i Im lam) psi(gamma x))`` over the offsets.

    Returns ``(limsup, liminf)``; with ``reference=True`` a third item holds
    the grid maximum of ``|psi|`` and the extremes of ``Re psi`` over a period.
    """
    if len(s) == 0:
        zero = {"max_abs": 0.0, "max_re": 0.0, "min_re": 0.0}
        return (0.0, 0.0, zero) if reference else (0.0, 0.0)
    g = gamma_for(pt)
    sig = t.lookup(g)
    Nt = min(N, sig.truncation)
    offs = np.asarray(list(scales), dtype=float)
    u = -pt.q * offs
    gx = 1.0 / (pt.q * u) - g.r / pt.q
    psi = antiderivative_eval(sig, 0, gx, Nt)
    vals = np.real(np.abs(u) ** (1j * s.lam.imag) * psi)
    if not reference:
        return float(vals.max()), float(vals.min())
    # the envelope only needs the low modes; psi's coefficients decay like 1/n
    ref = sig.truncated(min(Nt, grid_points // 8))
    w = ref.values * sig.period / (2j * np.pi * ref.indices)
    grid = periodic_grid(ref, w, grid_points)
    env = {"max_abs": float(np.abs(grid).max()),
           "max_re": float(grid.real.max()), "min_re": float(grid.real.min())}
    return float(vals.max()), float(vals.min()), env


def pointwise_lipschitz(s: FourierSeries, pt: RationalPoint, offsets, N: int) -> float:
    """``max |phi(x) - phi(p/q)| / |x - p/q|`` over the offsets (the Re lambda = 0 bound)."""
    offs = np.asarray(list(offsets), dtype=float)
    diff = antiderivative_difference(s, 0, pt.value, offs, N)
    return float(np.max(np.abs(diff) / np.abs(offs)))


@dataclass
class DerivativeEstimate:
    scales: list                 # (h, centered quotient), h decreasing
    value: float                 # quotient at the finest stable scale
    finest_stable: float         # that scale

    def to_dict(self) -> dict:
        return asdict(self)


def difference_quotients(s: FourierSeries, pt: RationalPoint, scales, N: int,
                         part: str = "real", tol: float = 0.01) -> DerivativeEstimate:
    """Centered quotients ``(phi(x+h) - phi(x-h)) / 2h`` at ``p/q``.

    The finest stable scale is the smallest ``h`` whose quotient differs from
    the one at the previous (coarser) scale by at most ``tol`` relative.
    """
    hs = sorted((float(h) for h in scales), reverse=True)
    if len(hs) < 2:
        raise PreconditionError("need at least two scales")
    comp = np.real if part == "real" else np.imag
    offs = np.concatenate([hs, [-h for h in hs]])
    d = antiderivative_difference(s, 0, pt.value, offs, N)
    m = len(hs)
    quot = [float(comp(d[i] - d[m + i]) / (2 * hs[i])) for i in range(m)]
    best = 0
    for i in range(1, m):
        if abs(quot[i] - quot[i - 1]) <= tol * max(abs(quot[i]), 1e-300):
            best = i
    return DerivativeEstimate(list(zip(hs, quot)), quot[best], hs[best])
