"""Independent reference computations used by the tests.

These deliberately avoid the package's own algorithms: plain Python lists,
schoolbook products and exhaustive searches over generous boxes.
"""
import math
from fractions import Fraction


def poly_mul(a, b, M):
    out = [0] * (M + 1)
    for i, x in enumerate(a[: M + 1]):
        if x:
            for j, y in enumerate(b[: M + 1 - i]):
                out[i + j] += x * y
    return out


def euler_product_naive(M):
    """prod_{n=1}^{M} (1 - q^n) by repeated multiplication."""
    out = [1] + [0] * M
    for n in range(1, M + 1):
        factor = [0] * (M + 1)
        factor[0] = 1
        factor[n] = -1
        out = poly_mul(out, factor, M)
    return out


def eta_coefficients_naive(M):
    """Coefficients of e(x/24) prod (1 - e(n x)) in the variable e(x/24), indices <= M."""
    L = M // 24
    e = euler_product_naive(L + 1)
    out = {}
    for j, c in enumerate(e):
        n = 1 + 24 * j
        if c and n <= M:
            out[n] = c
    return out


def eta_product_11_naive(M):
    """q prod (1-q^n)^2 (1-q^{11n})^2 up to q^M."""
    L = M
    e = euler_product_naive(L)
    e2 = poly_mul(e, e, L)
    e11 = [0] * (L + 1)
    for j, c in enumerate(e2):
        if 11 * j <= L:
            e11[11 * j] = c
    prod = poly_mul(e2, e11, L)
    return {n: prod[n - 1] for n in range(1, M + 1) if prod[n - 1]}


def eta_eta23_naive(M):
    """eta(z) eta(23 z) = q prod (1-q^n)(1-q^{23 n}), up to q^M."""
    e = euler_product_naive(M)
    e23 = [0] * (M + 1)
    for j, c in enumerate(e):
        if 23 * j <= M:
            e23[23 * j] = c
    prod = poly_mul(e, e23, M)
    return {n: prod[n - 1] for n in range(1, M + 1) if prod[n - 1]}


def lattice_counts(a, b, c, M, box=None):
    """Number of (x, y) with a x^2 + b x y + c y^2 = m, by exhaustive search."""
    box = box or 4 * math.isqrt(M) + 10
    counts = [0] * (M + 1)
    for x in range(-box, box + 1):
        for y in range(-box, box + 1):
            v = a * x * x + b * x * y + c * y * y
            if v <= M:
                counts[v] += 1
    return counts


def cf_convergents_exact(x: Fraction, depth):
    """Convergents of a rational by the textbook recurrence."""
    out = []
    p0, q0, p1, q1 = 0, 1, 1, 0
    while len(out) < depth:
        a = math.floor(x)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
        if x == a:
            break
        x = 1 / (x - a)
    return out
