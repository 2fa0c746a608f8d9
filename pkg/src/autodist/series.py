"""Fourier coefficient data of SL(2) automorphic distributions.

A distribution of period ``P`` is stored as its Fourier table

    tau(x) = c0 + sum_{0 < |n| <= M} c_n e(n x / P),    e(x) = exp(2 pi i x),

where only the nonzero ``c_n`` are kept (theta and eta are supported on
squares, so a sparse table is what makes very large truncations affordable).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from .errors import InvariantError, ParseError, PreconditionError, UnavailableTranslate

__all__ = [
    "SpectralParams", "FourierSeries", "TranslateTable",
    "theta_series", "eta_series", "eta_product_11", "weight_one_23",
    "from_coefficients", "zero_series", "load_series", "save_series",
    "maass_sample", "langlands_convert", "translate_lookup",
    "eta_multiplier", "eta_translates", "theta_translates", "BUILTINS",
]


@dataclass(frozen=True)
class SpectralParams:
    """Principal-series type ``(lambda, delta)`` plus period and cuspidality.

    ``delta`` is read mod 2, or mod 4 when ``metaplectic`` is set; the
    genuine metaplectic case is ``delta = +-1 mod 4``.
    """

    lam: complex
    delta: int
    period: int = 1
    cuspidal: bool = False
    weight_hint: int | None = None
    metaplectic: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lam", complex(self.lam))
        modulus = 4 if self.metaplectic else 2
        object.__setattr__(self, "delta", int(self.delta) % modulus)
        if int(self.period) != self.period or self.period < 1:
            raise InvariantError("period", f"must be a positive integer, got {self.period}")
        if self.weight_hint is not None and self.lam != 1 - self.weight_hint:
            raise InvariantError(
                "weight_hint", f"weight {self.weight_hint} requires lambda = {1 - self.weight_hint}")

    @property
    def genuine(self) -> bool:
        return self.metaplectic and self.delta % 2 == 1

    def sign_power(self, sign: int, extra: int = 0) -> complex:
        """``(sg)^(delta + extra)``, with ``(-1)^delta = i^delta`` in the genuine case."""
        if sign > 0:
            return 1.0 + 0j
        base = 1j ** self.delta if self.genuine else (-1.0) ** self.delta
        return complex(base * (-1.0) ** extra)


def _readonly(a):
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FourierSeries:
    """Truncated, immutable Fourier table of a periodic distribution."""

    params: SpectralParams
    c0: complex
    indices: np.ndarray
    values: np.ndarray
    truncation: int
    normalization: str = "c"
    label: str = field(default="", compare=False)

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64).ravel()
        val = np.asarray(self.values, dtype=np.complex128).ravel()
        if idx.shape != val.shape:
            raise InvariantError("coeffs", "indices and values differ in length")
        keep = val != 0
        idx, val = idx[keep], val[keep]
        order = np.argsort(idx, kind="stable")
        idx, val = idx[order], val[order]
        if idx.size and np.any(np.diff(idx) == 0):
            raise InvariantError("coeffs", "duplicate index")
        M = int(self.truncation)
        if M < 1:
            raise InvariantError("truncation", f"must be >= 1, got {M}")
        if idx.size and (np.any(idx == 0) or np.abs(idx).max() > M):
            raise InvariantError("coeffs", f"indices must satisfy 0 < |n| <= {M}")
        c0 = complex(self.c0)
        if self.params.cuspidal and c0 != 0:
            raise InvariantError("c0", "a cuspidal series has zero constant term")
        if self.params.lam.real <= 0 and c0 != 0:
            raise InvariantError("c0", "constant term must vanish when Re(lambda) <= 0")
        if self.normalization not in ("c", "a"):
            raise InvariantError("normalization", "must be 'c' or 'a'")
        object.__setattr__(self, "indices", _readonly(idx))
        object.__setattr__(self, "values", _readonly(val))
        object.__setattr__(self, "truncation", M)
        object.__setattr__(self, "c0", c0)

    @property
    def period(self) -> int:
        return self.params.period

    @property
    def lam(self) -> complex:
        return self.params.lam

    def __len__(self):
        return int(self.indices.size)

    def coefficient(self, n: int) -> complex:
        if n == 0:
            return self.c0
        i = np.searchsorted(self.indices, n)
        if i < self.indices.size and self.indices[i] == n:
            return complex(self.values[i])
        return 0j

    def as_dict(self) -> dict[int, complex]:
        return {int(n): complex(v) for n, v in zip(self.indices, self.values)}

    def window(self, N: int, sign: int = 0):
        """Indices and values with ``0 < |n| <= N``, optionally one-sided."""
        mask = np.abs(self.indices) <= N
        if sign > 0:
            mask &= self.indices > 0
        elif sign < 0:
            mask &= self.indices < 0
        return self.indices[mask], self.values[mask]

    def with_values(self, values, *, c0=None, params=None, normalization=None, label=None):
        return FourierSeries(
            params=params or self.params,
            c0=self.c0 if c0 is None else c0,
            indices=self.indices,
            values=values,
            truncation=self.truncation,
            normalization=normalization or self.normalization,
            label=self.label if label is None else label,
        )

    def scaled(self, z: complex) -> "FourierSeries":
        return self.with_values(self.values * z, c0=self.c0 * z)

    def shifted(self, j) -> "FourierSeries":
        """The series of ``y -> tau(y - j)`` for rational ``j``."""
        j = Fraction(j)
        den = j.denominator * self.period
        res = np.array([(int(n) * j.numerator) % den for n in self.indices], dtype=float)
        return self.with_values(self.values * np.exp(-2j * np.pi * res / den))

    def truncated(self, M: int) -> "FourierSeries":
        idx, val = self.window(M)
        return FourierSeries(self.params, self.c0, idx, val, M, self.normalization, self.label)

    def metadata(self) -> dict:
        p = self.params
        return {
            "label": self.label,
            "lambda_re": p.lam.real, "lambda_im": p.lam.imag,
            "delta": p.delta, "metaplectic": p.metaplectic,
            "period": p.period, "cuspidal": p.cuspidal,
            "normalization": self.normalization, "truncation": self.truncation,
        }


def from_coefficients(coeffs: Mapping[int, complex], params: SpectralParams, *,
                      c0: complex = 0, truncation: int | None = None,
                      normalization: str = "c", label: str = "") -> FourierSeries:
    idx = np.fromiter(coeffs.keys(), dtype=np.int64, count=len(coeffs))
    val = np.fromiter(coeffs.values(), dtype=np.complex128, count=len(coeffs))
    if truncation is None:
        truncation = int(np.abs(idx).max()) if idx.size else 1
    return FourierSeries(params, c0, idx, val, truncation, normalization, label)


def zero_series(params: SpectralParams | None = None, truncation: int = 1) -> FourierSeries:
    params = params or SpectralParams(lam=0.5, delta=0, cuspidal=True)
    return FourierSeries(params, 0, [], [], truncation, label="zero")


# ---------------------------------------------------------------- generators

THETA_PARAMS = SpectralParams(lam=0.5, delta=1, period=1, cuspidal=False, metaplectic=True)
ETA_PARAMS = SpectralParams(lam=0.5, delta=1, period=24, cuspidal=True, metaplectic=True)
ETA11_PARAMS = SpectralParams(lam=-1, delta=0, period=1, cuspidal=True, weight_hint=2)
WEIGHT1_PARAMS = SpectralParams(lam=0, delta=1, period=1, cuspidal=True, weight_hint=1)


def theta_series(M: int) -> FourierSeries:
    """Boundary distribution of ``theta(z) = sum_n e(n^2 z)``."""
    if M < 1:
        raise PreconditionError(f"theta_series needs M >= 1, got {M}")
    m = np.arange(1, math.isqrt(M) + 1, dtype=np.int64)
    return FourierSeries(THETA_PARAMS, 1.0, m * m, np.full(m.size, 2.0), M, label="theta")


def eta_series(M: int) -> FourierSeries:
    """Dedekind eta at period 24: ``c_n = (-1)^k`` for ``n = (6k+1)^2``."""
    if M < 1:
        raise PreconditionError(f"eta_series needs M >= 1, got {M}")
    root = math.isqrt(M)
    k = np.arange(-(root + 1) // 6 - 1, (root - 1) // 6 + 2, dtype=np.int64)
    m = 6 * k + 1
    k, m = k[np.abs(m) <= root], m[np.abs(m) <= root]
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    return FourierSeries(ETA_PARAMS, 0, m * m, sign, M, label="eta")


def _euler_product(M: int) -> np.ndarray:
    """Coefficients of ``prod_{n>=1} (1 - q^n)`` up to ``q^M`` (pentagonal numbers)."""
    out = np.zeros(M + 1, dtype=np.int64)
    k = 0
    while True:
        hit = False
        for kk in ((k,) if k == 0 else (k, -k)):
            e = kk * (3 * kk - 1) // 2
            if e <= M:
                out[e] += -1 if kk % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return out


def _series_mul(a: np.ndarray, b: np.ndarray, M: int) -> np.ndarray:
    nz = np.flatnonzero(b)
    out = np.zeros(M + 1, dtype=np.int64)
    for j in nz:
        out[j:] += b[j] * a[: M + 1 - j]
    return out


def eta_product_11(M: int) -> FourierSeries:
    """``eta(z)^2 eta(11 z)^2``, the weight-two newform of level 11."""
    if M < 1:
        raise PreconditionError(f"eta_product_11 needs M >= 1, got {M}")
    L = M - 1
    e = _euler_product(L)
    e2 = _series_mul(e, e, L)
    e2_11 = np.zeros(L + 1, dtype=np.int64)
    e2_11[::11] = e2[: L // 11 + 1]
    prod = _series_mul(e2, e2_11, L)
    n = np.arange(1, M + 1, dtype=np.int64)
    return FourierSeries(ETA11_PARAMS, 0, n, prod.astype(float), M, label="eta_product_11")


def _representation_counts(a: int, b: int, c: int, M: int) -> np.ndarray:
    disc = 4 * a * c - b * b
    n_max = math.isqrt(4 * a * M // disc) + 1
    m_max = math.isqrt(4 * c * M // disc) + 1
    m = np.arange(-m_max, m_max + 1, dtype=np.int64)
    counts = np.zeros(M + 1, dtype=np.int64)
    for n in range(-n_max, n_max + 1):
        v = a * m * m + b * m * n + c * n * n
        v = v[v <= M]
        counts += np.bincount(v, minlength=M + 1)[: M + 1]
    return counts


def weight_one_23(M: int) -> FourierSeries:
    """Half the difference of the theta series of the two level-23 binary forms."""
    if M < 1:
        raise PreconditionError(f"weight_one_23 needs M >= 1, got {M}")
    r1 = _representation_counts(1, 1, 6, M)
    r2 = _representation_counts(2, 1, 3, M)
    diff = r1 - r2
    if np.any(diff % 2):
        raise InvariantError("coeffs", "odd representation difference")
    n = np.arange(1, M + 1, dtype=np.int64)
    return FourierSeries(WEIGHT1_PARAMS, 0, n, (diff[1:] // 2).astype(float), M,
                         label="weight_one_23")


BUILTINS: dict[str, Callable[[int], FourierSeries]] = {
    "theta": theta_series,
    "eta": eta_series,
    "eta11": eta_product_11,
    "eta_product_11": eta_product_11,
    "weight1": weight_one_23,
    "weight_one_23": weight_one_23,
}


# ----------------------------------------------------------------- file I/O

_HEADER_KEYS = {"lambda_re", "lambda_im", "delta", "period", "cuspidal",
                "normalization", "truncation", "metaplectic"}
_REQUIRED = _HEADER_KEYS - {"metaplectic"}


def _parse_bool(key, text):
    t = text.strip().lower()
    if t in ("true", "1", "yes"):
        return True
    if t in ("false", "0", "no"):
        return False
    raise ParseError(f"{key}: expected a boolean, got {text!r}")


def load_series(path) -> FourierSeries:
    """Read a coefficient file (header ``key = value`` lines, then ``n re im`` rows)."""
    path = Path(path)
    header: dict[str, str] = {}
    rows: dict[int, complex] = {}
    with path.open() as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line:
                if rows:
                    raise ParseError(f"{path}:{lineno}: header line after coefficient data")
                key, _, value = (t.strip() for t in line.partition("="))
                if key not in _HEADER_KEYS:
                    raise ParseError(f"{path}:{lineno}: unknown header key {key!r}")
                if key in header:
                    raise ParseError(f"{path}:{lineno}: repeated header key {key!r}")
                header[key] = value
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ParseError(f"{path}:{lineno}: expected 'n re im', got {line!r}")
            try:
                n = int(parts[0])
                z = complex(float(parts[1]), float(parts[2]))
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
            if n in rows:
                raise ParseError(f"{path}:{lineno}: duplicate index {n}")
            rows[n] = z
    missing = _REQUIRED - header.keys()
    if missing:
        raise ParseError(f"{path}: missing header keys {sorted(missing)}")
    try:
        params = SpectralParams(
            lam=complex(float(header["lambda_re"]), float(header["lambda_im"])),
            delta=int(header["delta"]),
            period=int(header["period"]),
            cuspidal=_parse_bool("cuspidal", header["cuspidal"]),
            metaplectic=_parse_bool("metaplectic", header.get("metaplectic", "false")),
        )
        truncation = int(header["truncation"])
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None
    c0 = rows.pop(0, 0j)
    return from_coefficients(rows, params, c0=c0, truncation=truncation,
                             normalization=header["normalization"], label=path.stem)


def save_series(s: FourierSeries, path, comments: str = "") -> None:
    p = s.params
    lines = [f"# {c}" for c in comments.splitlines()] if comments else []
    lines += [
        f"lambda_re = {p.lam.real!r}", f"lambda_im = {p.lam.imag!r}",
        f"delta = {p.delta}", f"period = {p.period}",
        f"cuspidal = {str(p.cuspidal).lower()}",
        f"metaplectic = {str(p.metaplectic).lower()}",
        f"normalization = {s.normalization}", f"truncation = {s.truncation}",
    ]
    c0 = complex(s.c0)
    if c0 != 0:
        lines.append(f"0 {c0.real!r} {c0.imag!r}")
    lines += [f"{int(n)} {float(v.real)!r} {float(v.imag)!r}" for n, v in zip(s.indices, s.values)]
    Path(path).write_text("\n".join(lines) + "\n")


def maass_sample() -> FourierSeries:
    """The shipped Maass-type sample table (see the file header for provenance)."""
    ref = resources.files("autodist").joinpath("data/maass_sample.txt")
    with resources.as_file(ref) as p:
        return load_series(p)


# ------------------------------------------------------- normalization change

def langlands_convert(s: FourierSeries, direction: str) -> FourierSeries:
    """Switch between ``c_n`` and ``a_n = |n|^(lambda/2) c_n``."""
    if direction not in ("c_to_a", "a_to_c"):
        raise PreconditionError(f"unknown direction {direction!r}")
    source, target = direction.split("_to_")
    if s.normalization != source:
        raise PreconditionError(
            f"series is in {s.normalization!r} normalization, cannot apply {direction}")
    weight = np.abs(s.indices).astype(float) ** (s.lam / 2)
    values = s.values * weight if direction == "c_to_a" else s.values / weight
    return s.with_values(values, normalization=target)


# --------------------------------------------------------------- translates

def _dedekind_sum(h: int, k: int) -> Fraction:
    def saw(x: Fraction) -> Fraction:
        if x.denominator == 1:
            return Fraction(0)
        return x - math.floor(x) - Fraction(1, 2)

    return sum((saw(Fraction(r, k)) * saw(Fraction(h * r, k)) for r in range(1, k)),
               Fraction(0))


def eta_multiplier(a: int, b: int, c: int, d: int) -> complex:
    """Unit ``eps`` with ``eta(gz) = eps (cz + d)^(1/2) eta(z)`` (principal root, c > 0)."""
    if a * d - b * c != 1:
        raise PreconditionError("matrix must have determinant 1")
    if c == 0:
        if d < 0:
            raise PreconditionError("c = 0 requires d = 1")
        return complex(np.exp(2j * np.pi * b / 24))
    if c < 0:
        raise PreconditionError("eta_multiplier expects c >= 0")
    phase = Fraction(a + d, 12 * c) - _dedekind_sum(d, c) - Fraction(1, 4)
    return complex(np.exp(1j * np.pi * float(phase)))


@dataclass(frozen=True)
class TranslateTable:
    """The translates ``pi(gamma) tau`` needed at rational points.

    Convention: for ``gamma = (r, -s; -q, p)`` and ``u = p - q x``,
    ``tau(x) = sg(u)^delta |u|^(lambda-1) sigma(gamma x)`` where ``sigma`` is
    the stored translate and ``sg^delta`` is :meth:`SpectralParams.sign_power`.
    """

    base: FourierSeries
    rule: str = "identity"                                  # identity | character | file
    character: Callable[[object], complex] | None = None
    entries: Mapping[tuple[int, int], tuple[object, FourierSeries]] = field(default_factory=dict)

    def __post_init__(self):
        if self.rule not in ("identity", "character", "file"):
            raise InvariantError("default_rule", f"unknown rule {self.rule!r}")
        if self.rule == "character" and self.character is None:
            raise InvariantError("default_rule", "character rule needs a character map")
        for key, (_, ser) in self.entries.items():
            if ser.lam != self.base.lam or ser.params.delta != self.base.params.delta:
                raise InvariantError("entries", f"translate at {key} changes (lambda, delta)")

    def available(self, g) -> bool:
        return self.rule != "file" or (g.p, g.q) in self.entries

    def lookup(self, g) -> FourierSeries:
        return translate_lookup(self, g)


def translate_lookup(t: TranslateTable, g) -> FourierSeries:
    if g.p * g.r - g.q * g.s != 1:
        raise PreconditionError("unimodular map must have determinant 1")
    key = (g.p, g.q)
    if key in t.entries:
        g0, ser = t.entries[key]
        if g0.r == g.r:
            return ser
        # gamma' = T^j gamma with r' = r - j q: sigma'(y) = sigma(y - j)
        return ser.shifted(Fraction(g0.r - g.r, g.q))
    if t.rule == "identity":
        return t.base
    if t.rule == "character":
        return t.base.scaled(t.character(g))
    raise UnavailableTranslate(f"no translate supplied for p/q = {g.p}/{g.q}")


def eta_translates(base: FourierSeries) -> TranslateTable:
    """Translates of eta: unit multiples of eta given by the Dedekind multiplier."""

    def character(g) -> complex:
        # (-r, s; q, -p) acts like gamma and has positive lower-left entry
        return -1j / eta_multiplier(-g.r, g.s, g.q, -g.p)

    return TranslateTable(base=base, rule="character", character=character)


def theta_translate(gamma, M: int) -> FourierSeries:
    """``pi(gamma) theta`` for ``gamma = (r, -s; -q, p)``, by Poisson summation.

    ``sigma(y) = e^{-i pi/4} (2q)^{-1/2} sum_k G_k e(k^2 r / 4q) e(k^2 y / 4)``
    with the Gauss sums ``G_k = sum_{a mod q} e((p a^2 + k a) / q)``.
    """
    p, q, r = gamma.p, gamma.q, gamma.r
    kmax = math.isqrt(M)
    k = np.arange(0, kmax + 1, dtype=np.int64)
    a = np.arange(q, dtype=np.int64)
    # exact residues mod q keep the Gauss sums free of rounding drift
    res = (p * a[None, :] ** 2 + k[:, None] * a[None, :]) % q
    G = np.exp(2j * np.pi * res / q).sum(axis=1)
    G[np.abs(G) < 1e-9 * math.sqrt(q)] = 0
    twist = np.exp(2j * np.pi * ((k * k * r) % (4 * q)) / (4 * q))
    coef = np.exp(-0.25j * np.pi) / math.sqrt(2 * q) * G * twist
    params = SpectralParams(lam=0.5, delta=1, period=4, cuspidal=False, metaplectic=True)
    c0 = coef[0]
    if params.lam.real <= 0:
        c0 = 0
    return FourierSeries(params, c0, k[1:] ** 2, 2 * coef[1:], M, label=f"theta|{p}/{q}")


def theta_translates(base: FourierSeries, points, M: int | None = None) -> TranslateTable:
    """File-style table holding the theta translates at the given rationals."""
    from .rational import RationalPoint, gamma_for

    M = M or base.truncation
    entries = {}
    for pt in points:
        if not isinstance(pt, RationalPoint):
            pt = RationalPoint(*pt)
        g = gamma_for(pt)
        entries[(pt.p, pt.q)] = (g, theta_translate(g, M))
    return TranslateTable(base=base, rule="file", entries=entries)


def with_params(s: FourierSeries, **changes) -> FourierSeries:
    return s.with_values(s.values, params=replace(s.params, **changes))
