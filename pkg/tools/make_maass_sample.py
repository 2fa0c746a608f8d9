"""Regenerate ``src/autodist/data/maass_sample.txt``."""
from pathlib import Path

import numpy as np

from autodist.series import SpectralParams, from_coefficients, save_series

PROVENANCE = """\
Synthetic Maass-type sample table: Hecke-multiplicative coefficients with
Sato-Tate distributed angles drawn from a fixed seed, even under n -> -n,
tagged with the spectral parameter of the first even Maass form for SL(2, Z).
It is not an automorphic form, only a series with the same size and
multiplicative texture of coefficients.
Regenerate with tools/make_maass_sample.py."""

SEED = 20240601
M = 20000
R = 13.779751351890  # lambda = 2 i R


def sato_tate(rng, size):
    out = np.empty(0)
    while out.size < size:
        t = rng.uniform(0, np.pi, 4 * size)
        keep = rng.uniform(0, 1, t.size) < np.sin(t) ** 2
        out = np.concatenate([out, t[keep]])
    return out[:size]


def primes_upto(M):
    sieve = np.ones(M + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(M ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return [int(p) for p in np.flatnonzero(sieve)]


def hecke_coefficients(M, rng):
    primes = primes_upto(M)
    theta = sato_tate(rng, len(primes))
    a = np.zeros(M + 1)
    a[1] = 1.0
    # prime powers by the Hecke recursion a(p^{k+1}) = a(p) a(p^k) - a(p^{k-1})
    for p, th in zip(primes, theta):
        prev, cur, pk = 1.0, 2 * np.cos(th), p
        while pk <= M:
            a[pk] = cur
            prev, cur = cur, 2 * np.cos(th) * cur - prev
            pk *= p
    # multiplicativity: n = p^k m with gcd(p, m) = 1, p the smallest prime factor
    spf = np.zeros(M + 1, dtype=np.int64)
    for p in primes:
        sl = spf[p::p]
        sl[sl == 0] = p
    for n in range(2, M + 1):
        p = spf[n]
        m, pk = n, 1
        while m % p == 0:
            m //= p
            pk *= p
        if m > 1:
            a[n] = a[pk] * a[m]
    return a


def main():
    rng = np.random.default_rng(SEED)
    a = hecke_coefficients(M, rng)
    lam = 2j * R
    n = np.arange(1, M + 1)
    c = a[1:] * n ** (-lam / 2)
    coeffs = {int(k): complex(v) for k, v in zip(n, c) if v != 0}
    coeffs.update({-k: v for k, v in list(coeffs.items())})
    params = SpectralParams(lam=lam, delta=0, period=1, cuspidal=True)
    s = from_coefficients(coeffs, params, truncation=M, normalization="c", label="maass_sample")
    out = Path(__file__).resolve().parents[1] / "src/autodist/data/maass_sample.txt"
    save_series(s, out, comments=PROVENANCE + f"\nseed = {SEED}, M = {M}, R = {R}")
    print(f"wrote {len(s)} coefficients to {out}")


if __name__ == "__main__":
    main()
