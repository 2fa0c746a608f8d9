"""Empirical regularity: Hölder exponents, cancellation slopes and violation scans.

Every exponent is a least-squares slope in log-log coordinates and carries
its fit residual; a residual above 0.2 marks the estimate as unstable.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .diophantine import convergents, eta_points
from .errors import InadmissibleParameters, PreconditionError, ResolutionError
from .evaluation import antiderivative_difference, sup_abs_periodic, sup_partial_sum
from .series import FourierSeries, SpectralParams

__all__ = [
    "HoelderEstimate", "RegularityPrediction", "ViolationReport", "predict_regularity",
    "dyadic_scales", "default_scales", "global_exponent", "pointwise_exponent", "violation_scan",
    "criteria_exponent", "bernstein_sums", "estimate_csv", "FIT_RESIDUAL_LIMIT",
]

FIT_RESIDUAL_LIMIT = 0.2
STABILITY_LIMIT = 0.05


def _fit(x, y):
    x, y = np.asarray(x, float), np.asarray(y, float)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(coef[0]), float(np.sqrt(np.mean((y - A @ coef) ** 2)))


def dyadic_scales(j_min: int, j_max: int) -> list[float]:
    """``2^-j`` for ``j = j_min..j_max``, decreasing."""
    return [2.0 ** -j for j in range(j_min, j_max + 1)]


def default_scales(s: FourierSeries, N: int, j_min: int = 2) -> list[float]:
    """Dyadic ``h = 2^-j P`` down to the last one above ``10 P / N``."""
    j_max = int(math.floor(math.log2(N / 10)))
    if j_max - j_min < 3:
        raise ResolutionError(f"N={N} is too small for a scale sweep")
    return [s.period * h for h in dyadic_scales(j_min, j_max)]


@dataclass
class HoelderEstimate:
    exponent: float
    scales: list                       # (h, oscillation) pairs, h decreasing
    grid_density: int
    truncation_N: int
    fit_residual: float
    stability_delta: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.scales) < 4:
            raise PreconditionError("an estimate needs at least 4 scales")
        hs = [h for h, _ in self.scales]
        if any(b >= a for a, b in zip(hs, hs[1:])):
            raise PreconditionError("scales must be strictly decreasing")

    @property
    def stable(self) -> bool:
        ok = self.fit_residual <= FIT_RESIDUAL_LIMIT
        if self.stability_delta is not None:
            ok = ok and self.stability_delta <= STABILITY_LIMIT
        return ok


def estimate_csv(est: HoelderEstimate) -> str:
    buf = io.StringIO()
    buf.write(f"# exponent={est.exponent:.6g}\n# fit_residual={est.fit_residual:.6g}\n")
    buf.write(f"# stability_delta={est.stability_delta}\n")
    for key, val in est.meta.items():
        buf.write(f"# {key}={val}\n")
    buf.write("h,oscillation,N,grid_density\n")
    for h, osc in est.scales:
        buf.write(f"{h:.12g},{osc:.12g},{est.truncation_N},{est.grid_density}\n")
    return buf.getvalue()


# -- predicted classes ------------------------------------------------------

@dataclass(frozen=True)
class RegularityPrediction:
    tau_class: float
    strict: bool                 # True means C^{<tau_class}
    source_case: str             # noncuspidal | cuspidal_generic | cuspidal_integer

    def antiderivative_class(self, k: int = 1) -> float:
        return self.tau_class + k

    def __str__(self):
        return f"C^{'<' if self.strict else ''}{self.tau_class:g} ({self.source_case})"


def _admissible(p: SpectralParams) -> bool:
    lam, d = p.lam, p.delta
    if p.metaplectic:
        # half-integral weight k = 1 - lam >= 1/2
        k = 1 - lam.real
        return abs(lam.imag) < 1e-12 and k >= 0.5 and abs(2 * k - round(2 * k)) < 1e-12 \
            and round(2 * k) % 2 == 1
    k = 1 - lam.real
    if abs(lam.imag) < 1e-12 and abs(k - round(k)) < 1e-12 and round(k) >= 1 \
            and d % 2 == round(k) % 2:
        # holomorphic weight k, including weight one at lam = 0
        return p.cuspidal
    if abs(lam.real) < 1e-12 and d == 0:
        return p.cuspidal
    if abs(lam.real) < 1e-12 and d == 1:
        return p.cuspidal and abs(lam.imag) > 1e-12
    if abs(lam.imag) > 1e-12:
        return False
    x = lam.real
    if -1 < x < 0 and d == 0:
        return p.cuspidal
    return 0 < x < 1 and d == 0


def predict_regularity(params: SpectralParams) -> RegularityPrediction:
    """Hölder class of the distribution itself; add ``k`` for the k-th antiderivative."""
    if not _admissible(params):
        raise InadmissibleParameters(
            f"(lambda={params.lam}, delta={params.delta}, cuspidal={params.cuspidal}) "
            "is not an admissible parameter pair")
    lam = params.lam
    if not params.cuspidal:
        return RegularityPrediction(lam.real - 1, False, "noncuspidal")
    m = lam - 1
    if abs(m.imag) < 1e-12 and abs(m.real / 2 - round(m.real / 2)) < 1e-12:
        return RegularityPrediction(m.real / 2, True, "cuspidal_integer")
    return RegularityPrediction((lam.real - 1) / 2, False, "cuspidal_generic")


# -- global and pointwise exponents -----------------------------------------

def _global_osc(s, k, scales, G, N, order):
    idx, val = s.window(N)
    coef = val * (s.period / (2j * np.pi * idx.astype(float))) ** (k + 1)
    out = []
    for h in scales:
        t = np.pi * idx.astype(float) * h / s.period
        em1 = -2.0 * np.sin(t) ** 2 + 1j * np.sin(2.0 * t)
        out.append(sup_abs_periodic(idx, coef * em1 ** order, s.period, G))
    return out


def global_exponent(s: FourierSeries, k: int, scales, grid_density: int, N: int, *,
                    difference_order: int = 1, gate: bool = True) -> HoelderEstimate:
    """Slope of ``log sup_x |Delta_h^m phi^(-k)(x)|`` against ``log h``.

    ``grid_density`` is the number of grid points per period. Differences are
    applied as the exact Fourier multiplier ``(e(n h/P) - 1)^m``, so ``h`` need
    not lie on the grid. With ``gate`` the fit is repeated at doubled density
    and, when the truncation allows it, at ``4 N``.
    """
    scales = default_scales(s, N) if scales is None else scales
    scales = sorted((float(h) for h in scales), reverse=True)
    if N > s.truncation:
        raise ResolutionError(f"N={N} exceeds truncation {s.truncation}")
    idx, _ = s.window(N)
    top = int(np.abs(idx).max(initial=1))
    if grid_density < 2 * top:
        raise ResolutionError(f"grid_density must be >= 2 * (largest index) = {2 * top}")
    if min(scales) < s.period / N:
        raise ResolutionError("smallest scale lies below P/N, where the partial sum is smooth")
    osc = _global_osc(s, k, scales, grid_density, N, difference_order)
    slope, fr = _fit(np.log(scales), np.log(osc))
    delta = None
    if gate:
        d2 = _fit(np.log(scales), np.log(_global_osc(s, k, scales, 2 * grid_density, N,
                                                     difference_order)))[0]
        delta = abs(d2 - slope)
        if 4 * N <= s.truncation:
            Gn = max(grid_density, 2 * int(np.abs(s.window(4 * N)[0]).max(initial=1)))
            d4 = _fit(np.log(scales), np.log(_global_osc(s, k, scales, Gn, 4 * N,
                                                         difference_order)))[0]
            delta = max(delta, abs(d4 - slope))
    return HoelderEstimate(slope, list(zip(scales, osc)), grid_density, N, fr, delta,
                           meta={"k": k, "difference_order": difference_order,
                                 "label": s.label})


def pointwise_exponent(s: FourierSeries, k: int, x0, scales, N: int, *,
                       samples: int = 257, part: str = "real") -> HoelderEstimate:
    """Slope of ``log sup_{|x-x0|<=h} |Re(phi(x) - phi(x0))|`` against ``log h``.

    ``x0`` may be a float, ``Fraction`` or ``mpmath.mpf``; phases are anchored
    there, so offsets keep full relative precision.
    """
    scales = default_scales(s, N) if scales is None else scales
    scales = sorted((float(h) for h in scales), reverse=True)
    if min(scales) < s.period / N:
        raise ResolutionError("smallest scale lies below P/N, where the partial sum is smooth")
    comp = np.real if part == "real" else (np.imag if part == "imag" else np.abs)
    osc = []
    t = np.linspace(-1.0, 1.0, samples)
    t = t[t != 0]
    for h in scales:
        d = antiderivative_difference(s, k, x0, h * t, N)
        osc.append(float(np.max(np.abs(comp(d)))))
    slope, fr = _fit(np.log(scales), np.log(osc))
    return HoelderEstimate(slope, list(zip(scales, osc)), samples, N, fr,
                           meta={"k": k, "x0": _describe(x0), "part": part})


def _describe(x0) -> str:
    if isinstance(x0, mpmath.mpf):
        return mpmath.nstr(x0, 20)
    return str(x0)


# -- violation scans --------------------------------------------------------

@dataclass
class ViolationReport:
    alpha: float
    sup_values: list             # M_j
    convergents: list            # (p, q)
    truncations: list
    etas: list

    @property
    def growth_ratio(self) -> float:
        first = self.sup_values[0]
        if first == 0:
            return 0.0 if max(self.sup_values) == 0 else math.inf
        return max(self.sup_values) / first

    @property
    def monotone_fraction(self) -> float:
        v = self.sup_values
        if len(v) < 2:
            return 0.0
        return sum(b > a for a, b in zip(v, v[1:])) / (len(v) - 1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# alpha={self.alpha}\n# growth_ratio={self.growth_ratio:.6g}\n")
        buf.write(f"# monotone_fraction={self.monotone_fraction:.6g}\n")
        buf.write("j,p,q,N,M\n")
        for j, ((p, q), N, m) in enumerate(zip(self.convergents, self.truncations,
                                                self.sup_values)):
            buf.write(f"{j},{p},{q},{N},{m:.12g}\n")
        return buf.getvalue()


def violation_scan(s: FourierSeries, t, x0, alpha: float, depth: int, *,
                   etas=None, resolution: float = 100.0, part: str = "real",
                   dps: int = 60) -> ViolationReport:
    """``M_j = max_eta |x_eta - x0|^-alpha |Re(phi(x_eta) - phi(x0))|`` per convergent.

    ``x_eta`` runs between ``p_j/q_j`` and ``x0``. The truncation for window
    ``j`` is ``resolution * P / min|x_eta - x0|``, enough for the difference to
    converge at that scale. ``t`` (a translate table) is accepted for
    interface symmetry; the scan itself needs only the series.
    """
    etas = np.linspace(0.02, 0.98, 49) if etas is None else np.asarray(etas, float)
    if np.any((etas <= 0) | (etas >= 1)):
        raise PreconditionError("etas must lie in (0, 1)")
    comp = np.real if part == "real" else np.imag
    cs = convergents(x0, depth=depth, dps=dps)
    with mpmath.workdps(dps):
        X = x0(dps) if callable(x0) else mpmath.mpf(x0)
    M, Ns, pq = [], [], []
    from .rational import RationalPoint
    for c in cs:
        pts = eta_points(RationalPoint(c.p, c.q), X, etas, dps=dps)
        with mpmath.workdps(dps):
            d = np.array([float(x - X) for x in pts])
        N = int(min(s.truncation, math.ceil(resolution * s.period / np.abs(d).min())))
        if len(s) == 0:
            vals = np.zeros_like(d)
        else:
            vals = comp(antiderivative_difference(s, 0, X, d, N))
        M.append(float(np.max(np.abs(d) ** -alpha * np.abs(vals))))
        Ns.append(N)
        pq.append((c.p, c.q))
    return ViolationReport(alpha, M, pq, Ns, etas.tolist())


# -- Fourier-side criteria --------------------------------------------------

def criteria_exponent(s: FourierSeries, k: int, N_sweep, grid_density: int | None = None, *,
                      sign: int = 0, return_fit: bool = False):
    """Slope of ``log sup_x |sum_{|n|<=N} c_n n^k e(nx/P)|`` against ``log N``.

    The implied Hölder index is ``k - slope``. ``grid_density`` defaults to
    ``8 N`` at each ``N``.
    """
    Ns = sorted(int(n) for n in N_sweep)
    if len(Ns) < 3:
        raise PreconditionError("need at least 3 values of N")
    sups = []
    for N in Ns:
        G = grid_density or 8 * N
        G = max(G, 8 * N)
        sups.append(sup_partial_sum(s, k, N, 1 << math.ceil(math.log2(G)), sign=sign))
    slope, fr = _fit(np.log(Ns), np.log(sups))
    return (slope, fr, sups) if return_fit else slope


def bernstein_sums(s: FourierSeries, alpha: float, N_sweep=None):
    """Tail growth slopes of ``sum |n|^(2a)|c_n|^2`` and ``sum |n|^(a-1/2)|c_n|``.

    Slopes are fitted over the last four sweep points; a convergent sum gives a
    slope near zero.
    """
    if N_sweep is None:
        top = int(math.log2(s.truncation))
        N_sweep = [2 ** j for j in range(max(1, top - 7), top + 1)]
    Ns = sorted(int(n) for n in N_sweep)
    if len(Ns) < 4 or Ns[-1] > s.truncation:
        raise ResolutionError("need 4 sweep points within the truncation")
    n = np.abs(s.indices).astype(float)
    a = np.abs(s.values)
    quad = np.array([np.sum(n[n <= N] ** (2 * alpha) * a[n <= N] ** 2) for N in Ns])
    lin = np.array([np.sum(n[n <= N] ** (alpha - 0.5) * a[n <= N]) for N in Ns])
    x = np.log(Ns[-4:])

    def slope(v):
        v = v[-4:]
        if np.all(v == v[0]):
            return 0.0
        return _fit(x, np.log(v))[0]

    return slope(quad), slope(lin)
